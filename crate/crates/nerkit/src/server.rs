//! HTTP prediction service.
//!
//! Routes:
//!
//! * `GET /health` → `{"status":"ok"}`
//! * `GET /models` → loaded model names with their label inventories
//! * `POST /predict` with `{"text": "...", "model": "name"?}` → tokens with
//!   character offsets and scored entity spans
//! * `GET /` and other paths → the static demo bundle, when configured
//!
//! The model registry is built once at startup and shared read-only by all
//! requests.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use nerkit_core::{TaggerError, TaggerModel, TokenSpan};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use crate::annotate::{annotate, AnnotatedSpan};
use crate::model_file::load_model;
use crate::{Error, Result};

/// Longest accepted request text, in characters.
pub const MAX_TEXT_CHARS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct Registry {
    models: BTreeMap<String, Arc<TaggerModel>>,
    default: String,
}

impl Registry {
    /// The first model given is the default one.
    pub fn new(models: Vec<(String, TaggerModel)>) -> Result<Self> {
        let default = models
            .first()
            .map(|(n, _)| n.clone())
            .ok_or_else(|| Error::Usage("at least one model is required".into()))?;
        let mut map = BTreeMap::new();
        for (name, model) in models {
            if map.insert(name.clone(), Arc::new(model)).is_some() {
                return Err(Error::Usage(format!("model name {name:?} given twice")));
            }
        }
        Ok(Registry {
            models: map,
            default,
        })
    }

    /// Loads `name=path` pairs.
    pub fn load(specs: &[(String, PathBuf)]) -> Result<Self> {
        let models = specs
            .iter()
            .map(|(name, path)| Ok((name.clone(), load_model(path)?)))
            .collect::<Result<Vec<_>>>()?;
        Registry::new(models)
    }

    pub fn default_name(&self) -> &str {
        &self.default
    }

    pub fn get(&self, name: &str) -> Option<&Arc<TaggerModel>> {
        self.models.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.models.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictRequest {
    pub text: String,
    #[serde(default)]
    pub model: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictResponse {
    pub tokens: Vec<TokenSpan>,
    pub spans: Vec<AnnotatedSpan>,
    pub model: String,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub name: String,
    pub labels: Vec<String>,
    pub default: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

pub fn list_models(registry: &Registry) -> Vec<ModelInfo> {
    registry
        .models
        .iter()
        .map(|(name, m)| ModelInfo {
            name: name.clone(),
            labels: m.labels().names().to_vec(),
            default: *name == registry.default,
        })
        .collect()
}

/// Validates the request, picks the model and annotates the text.
pub fn handle_predict(
    registry: &Registry,
    req: &PredictRequest,
) -> std::result::Result<PredictResponse, ApiError> {
    let start = Instant::now();
    if req.text.trim().is_empty() {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "text must not be blank"));
    }
    if req.text.chars().count() > MAX_TEXT_CHARS {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("text exceeds {MAX_TEXT_CHARS} characters"),
        ));
    }
    let name = req.model.as_deref().unwrap_or(&registry.default);
    let model = registry
        .get(name)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown model {name:?}")))?;
    let annotation = annotate(&req.text, model).map_err(|e| match e {
        TaggerError::EmptySentence => ApiError::new(StatusCode::BAD_REQUEST, "text has no tokens"),
        other => {
            eprintln!("predict failed: {other}");
            ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal error")
        }
    })?;
    Ok(PredictResponse {
        tokens: annotation.tokens,
        spans: annotation.spans,
        model: name.to_string(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn models(State(registry): State<Arc<Registry>>) -> Json<Vec<ModelInfo>> {
    Json(list_models(&registry))
}

async fn predict_route(
    State(registry): State<Arc<Registry>>,
    body: std::result::Result<Json<PredictRequest>, JsonRejection>,
) -> std::result::Result<Json<PredictResponse>, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    handle_predict(&registry, &req).map(Json)
}

pub fn router(registry: Arc<Registry>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/health", get(health))
        .route("/models", get(models))
        .route("/predict", post(predict_route))
        .with_state(registry);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(CorsLayer::permissive())
}

/// Binds `addr` and serves until the process is interrupted.
pub async fn serve(addr: SocketAddr, app: Router) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Error::io(addr.to_string(), e))?;
    eprintln!("listening on http://{}", listener.local_addr().map_err(|e| Error::io(addr.to_string(), e))?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(addr.to_string(), e))
}
