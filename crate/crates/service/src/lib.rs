//! JSON/HTTP front end for the compiler, used by the browser editor.
//!
//! | route                    | body                     | reply                          |
//! |--------------------------|--------------------------|--------------------------------|
//! | `POST /api/compile`      | [`CompileRequest`]       | `audio/midi` bytes             |
//! | `POST /api/validate`     | [`CompileRequest`]       | [`ValidationReport`]           |
//! | `GET /api/library`       |                          | `[{id, title, canonical}]`     |
//! | `GET /api/library/{id}`  |                          | [`SongBody`]                   |
//! | `GET /api/meta`          |                          | [`Meta`]                       |
//!
//! Compile failures answer 422 with an [`ErrorBody`] whose `error_code` is
//! 1 (count mismatch), 2 (blank boxes) or 3 (syntax or range).

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use nmnc_core::instruments::GM_INSTRUMENTS;
use nmnc_core::nmn::{check_counts, parse_tempo_list, parse_tune_list, split_tokens, SyntaxError};
use nmnc_core::params::{parse_instrument, parse_scale, ParamError, MAX_LEVEL, MAX_REPEAT};
use nmnc_core::{
    compile_text, Compiled, Error, Library, MajorScale, ParamOverrides, ParamSet, RhythmStyle,
    SequencerOptions, Song, ValidationError,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const DEFAULT_PORT: u16 = 8473;
pub const PORT_ENV: &str = "NMNC_PORT";
pub const HEADER_TOTAL_TICKS: &str = "x-total-ticks";
pub const HEADER_BYTE_COUNT: &str = "x-byte-count";
pub const HEADER_WARNINGS: &str = "x-quantization-warnings";

/// An instrument given either as a program number or a General MIDI name.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum InstrumentRef {
    Program(i64),
    Name(String),
}

/// Box contents plus optional parameters; omitted parameters take the defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CompileRequest {
    #[serde(default)]
    pub tune: String,
    #[serde(default)]
    pub tempo: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tune_volume: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhythm_volume: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instrument: Option<InstrumentRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhythm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note_off: Option<bool>,
}

fn ranged(name: &'static str, v: i64, min: i64, max: i64) -> Result<i64, ParamError> {
    if (min..=max).contains(&v) {
        Ok(v)
    } else {
        Err(ParamError::OutOfRange {
            name,
            value: v,
            min,
            max,
        })
    }
}

impl CompileRequest {
    /// A request that reproduces a library song with its default parameters.
    pub fn for_song(song: &Song) -> Self {
        let p = song.default_params;
        CompileRequest {
            tune: song.tune_text.clone(),
            tempo: song.tempo_text.clone(),
            speed: Some(p.speed.into()),
            tune_volume: Some(p.tune_volume.into()),
            rhythm_volume: Some(p.rhythm_volume.into()),
            instrument: Some(InstrumentRef::Program(p.instrument.into())),
            scale: Some(p.scale.to_string()),
            rhythm: Some(p.rhythm.to_string()),
            repeat: Some(p.repeat.into()),
            note_off: None,
        }
    }

    pub fn overrides(&self) -> Result<ParamOverrides, ParamError> {
        let level = |name, v: Option<i64>| {
            v.map(|v| ranged(name, v, 0, MAX_LEVEL.into()).map(|v| v as u8))
                .transpose()
        };
        Ok(ParamOverrides {
            speed: level("speed", self.speed)?,
            tune_volume: level("volume", self.tune_volume)?,
            rhythm_volume: level("rhythm volume", self.rhythm_volume)?,
            instrument: match &self.instrument {
                None => None,
                Some(InstrumentRef::Program(n)) => Some(ranged("instrument", *n, 0, 127)? as u8),
                Some(InstrumentRef::Name(s)) => Some(parse_instrument(s)?),
            },
            scale: self.scale.as_deref().map(parse_scale).transpose()?,
            rhythm: self
                .rhythm
                .as_deref()
                .map(str::parse::<RhythmStyle>)
                .transpose()?,
            repeat: self
                .repeat
                .map(|v| ranged("repeat", v, 1, MAX_REPEAT.into()).map(|v| v as u16))
                .transpose()?,
        })
    }

    pub fn params(&self) -> Result<ParamSet, ParamError> {
        self.overrides()?.apply(ParamSet::default())
    }

    pub fn options(&self) -> SequencerOptions {
        SequencerOptions {
            note_off: self.note_off.unwrap_or(false),
        }
    }

    pub fn compile(&self) -> Result<Compiled, Error> {
        let params = self.params()?;
        compile_text(&self.tune, &self.tempo, &params, self.options())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_code: Option<u8>,
    pub message: String,
    pub detail: Value,
}

fn syntax_detail(field: &str, e: &SyntaxError) -> Value {
    json!({ "box": field, "position": e.position, "token": e.token, "reason": e.reason.to_string() })
}

impl From<&Error> for ErrorBody {
    fn from(err: &Error) -> Self {
        let detail = match err {
            Error::Validation(ValidationError::CountMismatch {
                tune_count,
                tempo_count,
            }) => json!({ "tune_count": tune_count, "tempo_count": tempo_count }),
            Error::TuneSyntax(e) => syntax_detail("tune", e),
            Error::TempoSyntax(e) => syntax_detail("tempo", e),
            Error::Range(r) => json!({ "note": r.value }),
            _ => Value::Null,
        };
        ErrorBody {
            error_code: Some(err.code()),
            message: err.to_string(),
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub tune_count: usize,
    pub tempo_count: usize,
    pub errors: Vec<ErrorBody>,
}

/// Parses both boxes and the parameters without compiling. Counts are raw
/// token counts so they stay meaningful while a box holds a typo.
pub fn validate_request(req: &CompileRequest) -> ValidationReport {
    let tune_count = split_tokens(&req.tune).len();
    let tempo_count = split_tokens(&req.tempo).len();
    let mut errors = Vec::new();
    if let Err(e) = parse_tune_list(&req.tune) {
        errors.push(ErrorBody::from(&Error::TuneSyntax(e)));
    }
    if let Err(e) = parse_tempo_list(&req.tempo) {
        errors.push(ErrorBody::from(&Error::TempoSyntax(e)));
    }
    if let Err(e) = check_counts(tune_count, tempo_count) {
        errors.push(ErrorBody::from(&Error::Validation(e)));
    }
    if let Err(e) = req.params() {
        errors.push(ErrorBody::from(&Error::Param(e)));
    }
    ValidationReport {
        ok: errors.is_empty(),
        tune_count,
        tempo_count,
        errors,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SongSummary {
    pub id: String,
    pub title: String,
    pub canonical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SongBody {
    pub id: String,
    pub title: String,
    pub canonical: bool,
    pub tune: String,
    pub tempo: String,
    pub params: ParamSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub instruments: Vec<String>,
    pub scales: Vec<String>,
    pub rhythms: Vec<String>,
}

pub fn meta() -> Meta {
    Meta {
        instruments: GM_INSTRUMENTS.iter().map(|s| s.to_string()).collect(),
        scales: MajorScale::ALL.iter().map(|s| s.to_string()).collect(),
        rhythms: RhythmStyle::ALL.iter().map(|r| r.to_string()).collect(),
    }
}

#[derive(Clone)]
struct AppState {
    library: Arc<Library>,
}

fn error_response(status: StatusCode, body: ErrorBody) -> Response {
    (status, Json(body)).into_response()
}

fn decode_request(body: &[u8]) -> serde_json::Result<CompileRequest> {
    let value: Value = serde_json::from_slice(body)?;
    if !value.is_object() {
        return Err(serde::de::Error::custom("expected a JSON object"));
    }
    serde_json::from_value(value)
}

fn parse_body(body: &[u8]) -> Result<CompileRequest, Box<Response>> {
    decode_request(body).map_err(|e| {
        Box::new(error_response(
            StatusCode::BAD_REQUEST,
            ErrorBody {
                error_code: None,
                message: "malformed JSON request".to_string(),
                detail: Value::String(e.to_string()),
            },
        ))
    })
}

async fn compile_handler(body: Bytes) -> Response {
    let req = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return *resp,
    };
    match req.compile() {
        Ok(out) => (
            [
                (header::CONTENT_TYPE, HeaderValue::from_static("audio/midi")),
                (
                    header::CONTENT_DISPOSITION,
                    HeaderValue::from_static("attachment; filename=\"0001.mid\""),
                ),
                (
                    header::HeaderName::from_static(HEADER_TOTAL_TICKS),
                    HeaderValue::from(out.total_ticks),
                ),
                (
                    header::HeaderName::from_static(HEADER_BYTE_COUNT),
                    HeaderValue::from(out.bytes.len()),
                ),
                (
                    header::HeaderName::from_static(HEADER_WARNINGS),
                    HeaderValue::from(out.warnings.len()),
                ),
            ],
            out.bytes,
        )
            .into_response(),
        Err(e) => error_response(StatusCode::UNPROCESSABLE_ENTITY, ErrorBody::from(&e)),
    }
}

async fn validate_handler(body: Bytes) -> Response {
    match parse_body(&body) {
        Ok(req) => Json(validate_request(&req)).into_response(),
        Err(resp) => *resp,
    }
}

async fn library_list(State(state): State<AppState>) -> Json<Vec<SongSummary>> {
    Json(
        state
            .library
            .songs()
            .iter()
            .map(|s| SongSummary {
                id: s.id.clone(),
                title: s.title.clone(),
                canonical: s.canonical,
            })
            .collect(),
    )
}

async fn library_get(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    match state.library.get_song(&id) {
        Ok(s) => Json(SongBody {
            id: s.id.clone(),
            title: s.title.clone(),
            canonical: s.canonical,
            tune: s.tune_text.clone(),
            tempo: s.tempo_text.clone(),
            params: s.default_params,
        })
        .into_response(),
        Err(e) => error_response(
            StatusCode::NOT_FOUND,
            ErrorBody {
                error_code: Some(4),
                message: e.to_string(),
                detail: json!({ "id": id }),
            },
        ),
    }
}

async fn meta_handler() -> Json<Meta> {
    Json(meta())
}

fn is_loopback_origin(origin: &HeaderValue) -> bool {
    let Ok(origin) = origin.to_str() else {
        return false;
    };
    let Some(rest) = origin
        .strip_prefix("http://")
        .or_else(|| origin.strip_prefix("https://"))
    else {
        return false;
    };
    let host = if rest.starts_with('[') {
        rest.split(']').next().map(|h| &h[1..]).unwrap_or("")
    } else {
        rest.split(':').next().unwrap_or("")
    };
    matches!(host, "localhost" | "127.0.0.1" | "::1")
}

pub fn router(library: Arc<Library>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| {
            is_loopback_origin(origin)
        }))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE])
        .expose_headers([
            header::HeaderName::from_static(HEADER_TOTAL_TICKS),
            header::HeaderName::from_static(HEADER_BYTE_COUNT),
            header::HeaderName::from_static(HEADER_WARNINGS),
            header::CONTENT_DISPOSITION,
        ]);
    Router::new()
        .route("/api/compile", post(compile_handler))
        .route("/api/validate", post(validate_handler))
        .route("/api/library", get(library_list))
        .route("/api/library/{id}", get(library_get))
        .route("/api/meta", get(meta_handler))
        .layer(cors)
        .with_state(AppState { library })
}
