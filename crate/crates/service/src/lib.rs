//! HTTP/JSON front end for the dynamic matching library.
//!
//! Sessions hold one live matcher each and accept batches of updates;
//! stateless endpoints run whole experiments, compute performance
//! profiles, validate sequences and solve static instances.

mod error;
mod routes;

pub use error::ApiError;
pub use routes::{router, AppState, MAX_VERTICES};

use std::net::SocketAddr;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

/// Serves the API on an already bound listener until the task is dropped.
pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(AppState::default())).await
}

/// A server running in the background of the current runtime.
pub struct RunningServer {
    pub addr: SocketAddr,
    pub handle: JoinHandle<std::io::Result<()>>,
}

impl RunningServer {
    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

/// Binds `addr` (port 0 picks a free port) and serves in a spawned task.
pub async fn spawn(addr: SocketAddr) -> std::io::Result<RunningServer> {
    let listener = TcpListener::bind(addr).await?;
    let addr = listener.local_addr()?;
    let handle = tokio::spawn(serve(listener));
    Ok(RunningServer { addr, handle })
}
