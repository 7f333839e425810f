use crate::{CliError, InputFormat};
use dynmatch_core::workload::{
    parse_edge_stream, parse_metis, parse_native, random_insertion_sequence, StaticGraph, UpdateOp,
    UpdateSequence,
};
use std::path::Path;

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

pub fn graph(path: &Path) -> Result<StaticGraph, CliError> {
    let g = parse_metis(&read(path)?).map_err(|e| parse_err(path, e))?;
    if g.dropped.total() > 0 {
        eprintln!("{}: dropped {:?}", path.display(), g.dropped);
    }
    Ok(g.graph)
}

/// Loads an instance as an update sequence. `shuffle` gives the seed of a
/// random insertion order and only applies to METIS graphs.
pub fn sequence(path: &Path, format: InputFormat, shuffle: Option<u64>) -> Result<UpdateSequence, CliError> {
    if shuffle.is_some() && format != InputFormat::Metis {
        return Err(CliError::Input("--random-order applies to METIS input only".into()));
    }
    match format {
        InputFormat::Metis => {
            let g = graph(path)?;
            Ok(match shuffle {
                Some(seed) => random_insertion_sequence(&g, seed),
                None => UpdateSequence::new(g.n, g.edges.iter().map(|&(u, v)| UpdateOp::insert(u, v)).collect()),
            })
        }
        InputFormat::Stream => {
            let s = parse_edge_stream(&read(path)?).map_err(|e| parse_err(path, e))?;
            if s.dropped.total() > 0 {
                eprintln!("{}: dropped {:?}", path.display(), s.dropped);
            }
            Ok(s.sequence)
        }
        InputFormat::Seq => parse_native(&read(path)?).map_err(|e| parse_err(path, e)),
    }
}

pub fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
