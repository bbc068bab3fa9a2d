//! HTTP service for composing triple poems one line at a time.
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | new session from `{keywords, variant, seed?, title?, rules?}` |
//! | GET | `/sessions` | session summaries |
//! | GET | `/sessions/{id}` | session record and current report |
//! | PUT | `/sessions/{id}/lines/{stanza}/{line}` | replace one line (1-based), `{text}` |
//! | POST | `/sessions/{id}/validate` | full validation report |
//! | GET | `/sessions/{id}/export?format=poem\|dot\|tikz\|json` | `.poem` text or a bundle |
//!
//! Errors are `{"error": "..."}` with status 404 (unknown session) or 422.

mod api;
pub mod session;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

pub use api::router;
pub use session::{SessionStore, StoreError};

/// Serves until the process is stopped. Sessions live in `dir` when given,
/// otherwise only in memory.
pub async fn serve(addr: SocketAddr, dir: Option<PathBuf>) -> std::io::Result<()> {
    let store = match dir {
        Some(dir) => SessionStore::open(dir).map_err(std::io::Error::other)?,
        None => SessionStore::in_memory(),
    };
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(store))).await
}
