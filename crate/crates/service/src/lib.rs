//! Play VertexNim over HTTP against the solver.
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | POST | `/games` | [`wire::CreateGame`] | 201 [`wire::Created`] |
//! | GET | `/games/{id}` | | [`wire::GameView`] |
//! | POST | `/games/{id}/moves` | [`wire::MoveRequest`] | [`wire::MoveResult`] |
//! | GET | `/games/{id}/analysis` | | [`wire::Analysis`] |
//!
//! Errors come back as [`wire::ErrorBody`]: 404 for an unknown id, 400 for
//! illegal moves and invalid instances, 422 for misère stockman.

pub mod api;
pub mod session;
pub mod wire;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use tokio::net::TcpListener;
use vertexnim::{Solver, SolverConfig};

pub use api::{router, router_with_static};
pub use session::{SessionError, SessionStore};

#[derive(Clone, Debug, Default)]
pub struct ServeOptions {
    pub static_dir: Option<PathBuf>,
    pub state_file: Option<PathBuf>,
    pub solver: SolverConfig,
}

/// Serves until Ctrl-C, then writes the snapshot if a state file is set.
pub async fn serve(addr: SocketAddr, options: ServeOptions) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    serve_on(listener, options).await
}

pub async fn serve_on(listener: TcpListener, options: ServeOptions) -> std::io::Result<()> {
    let solver = Arc::new(Solver::new(options.solver));
    let store = match &options.state_file {
        Some(path) => SessionStore::with_state_file(solver, path).map_err(std::io::Error::other)?,
        None => SessionStore::new(solver),
    };
    let store = Arc::new(store);
    let app = match &options.static_dir {
        Some(dir) => router_with_static(store.clone(), dir),
        None => router(store.clone()),
    };
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    store.save_snapshot().map_err(std::io::Error::other)?;
    Ok(())
}
