use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use crate::session::{Export, NewSession, SessionStore, StoreError};

pub struct ApiError(StatusCode, String);

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let status = match e {
            StoreError::NotFound(_) => StatusCode::NOT_FOUND,
            StoreError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            StoreError::Io(_) | StoreError::Corrupt { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(bytes).map_err(|e| {
        ApiError(
            StatusCode::UNPROCESSABLE_ENTITY,
            format!("invalid request body: {e}"),
        )
    })
}

// Store calls may write to disk and wait on a session lock.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, StoreError> + Send + 'static,
) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(ApiError::from)
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/lines/{stanza}/{line}", put(update_line))
        .route("/sessions/{id}/validate", post(validate))
        .route("/sessions/{id}/export", get(export))
        .with_state(store)
}

async fn create_session(
    State(store): State<Arc<SessionStore>>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let request: NewSession = body(&bytes)?;
    let view = blocking(move || store.create(request)).await?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn list_sessions(State(store): State<Arc<SessionStore>>) -> Response {
    Json(json!({ "sessions": store.list() })).into_response()
}

async fn get_session(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let view = store.with_session(&id, |s| s.view())?;
    Ok(Json(view).into_response())
}

#[derive(Deserialize)]
struct LineText {
    text: String,
}

async fn update_line(
    State(store): State<Arc<SessionStore>>,
    Path((id, stanza, line)): Path<(String, String, String)>,
    bytes: Bytes,
) -> ApiResult<Response> {
    let index = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| {
            ApiError(
                StatusCode::UNPROCESSABLE_ENTITY,
                format!("{what} must be a positive integer, got {s:?}"),
            )
        })
    };
    let stanza = index(&stanza, "stanza")?;
    let line = index(&line, "line")?;
    let LineText { text } = body(&bytes)?;
    let update = blocking(move || store.update_line(&id, stanza, line, &text)).await?;
    Ok(Json(update).into_response())
}

async fn validate(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<Response> {
    let report = store.with_session(&id, |s| s.report())?;
    Ok(Json(report).into_response())
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
}

async fn export(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Query(query): Query<ExportQuery>,
) -> ApiResult<Response> {
    let format = query.format.unwrap_or_else(|| "poem".to_owned());
    let exported = store.with_session(&id, |s| s.export(&format))??;
    Ok(match exported {
        Export::Poem(text) => {
            ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response()
        }
        Export::Bundle(bundle) => Json(bundle).into_response(),
    })
}
