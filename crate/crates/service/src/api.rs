//! HTTP routes.

use std::path::Path;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tower_http::services::ServeDir;

use crate::session::{SessionError, SessionStore};
use crate::wire::{Analysis, CreateGame, Created, ErrorBody, GameView, MoveRequest, MoveResult};

pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn bad_request(message: impl ToString) -> ApiError {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: message.to_string(),
                field: None,
            },
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match &e {
            SessionError::UnknownSession(_) => StatusCode::NOT_FOUND,
            SessionError::Unsupported(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::InvalidInstance { .. }
            | SessionError::IllegalMove(_)
            | SessionError::WrongTurn
            | SessionError::Finished => StatusCode::BAD_REQUEST,
            SessionError::Snapshot(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let field = match &e {
            SessionError::InvalidInstance { field, .. } => field.clone(),
            SessionError::Unsupported(_) => Some("game".into()),
            _ => None,
        };
        ApiError {
            status,
            body: ErrorBody {
                error: e.to_string(),
                field,
            },
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type Store = State<Arc<SessionStore>>;

/// Runs solver work off the async executor.
async fn blocking<T: Send + 'static>(
    store: Arc<SessionStore>,
    work: impl FnOnce(&SessionStore) -> Result<T, SessionError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(move || work(&store))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorBody {
                error: e.to_string(),
                field: None,
            },
        })?
        .map_err(ApiError::from)
}

async fn create_game(
    State(store): Store,
    body: Result<Json<CreateGame>, JsonRejection>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let Json(request) = body?;
    let created = blocking(store, move |s| s.create(&request)).await?;
    Ok((StatusCode::CREATED, Json(created)))
}

async fn get_game(State(store): Store, UrlPath(id): UrlPath<String>) -> Result<Json<GameView>, ApiError> {
    Ok(Json(store.view(&id)?))
}

async fn post_move(
    State(store): Store,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<MoveResult>, ApiError> {
    let Json(request) = body?;
    Ok(Json(blocking(store, move |s| s.submit_move(&id, &request)).await?))
}

async fn get_analysis(State(store): Store, UrlPath(id): UrlPath<String>) -> Result<Json<Analysis>, ApiError> {
    Ok(Json(blocking(store, move |s| s.analyze(&id)).await?))
}

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/analysis", get(get_analysis))
        .with_state(store)
}

/// [`router`] plus static files from `dir` for every other path.
pub fn router_with_static(store: Arc<SessionStore>, dir: &Path) -> Router {
    router(store).fallback_service(ServeDir::new(dir))
}
