use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use dynmatch_core::bench::RunError;
use dynmatch_core::protocol::{ErrorBody, ErrorKind};

#[derive(Debug)]
pub struct ApiError(pub ErrorBody);

impl ApiError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self(ErrorBody {
            kind,
            message: message.into(),
            op_index: None,
        })
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Input, message)
    }

    pub fn at(mut self, op_index: usize) -> Self {
        self.0.op_index = Some(op_index);
        self
    }

    pub fn status(&self) -> StatusCode {
        match self.0.kind {
            ErrorKind::Input => StatusCode::BAD_REQUEST,
            ErrorKind::NotFound => StatusCode::NOT_FOUND,
            ErrorKind::Audit => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.0)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::input(r.body_text())
    }
}

impl From<RunError> for ApiError {
    fn from(e: RunError) -> Self {
        let msg = e.to_string();
        match e {
            RunError::Config(_) => Self::input(msg),
            RunError::Graph { op_index, .. } | RunError::InvalidOp { op_index } => {
                Self::input(msg).at(op_index)
            }
            RunError::Audit { op_index, .. } => Self::new(ErrorKind::Audit, msg).at(op_index),
        }
    }
}
