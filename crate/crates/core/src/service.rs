//! HTTP front end: `/parse`, `/pretty`, `/wsm`, `/msm` and `/health`.
//!
//! [`handle`] is a pure function of the request and the preloaded tables; the
//! axum server only converts between HTTP and [`ServiceRequest`] /
//! [`ServiceResponse`] and runs `handle` on the blocking pool.

use std::collections::BTreeMap;
use std::future::Future;
use std::io;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;
use std::thread;

use axum::body::Body;
use axum::extract::{Request, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::Response;
use axum::Router;
use tokio::net::TcpListener;
use tokio::sync::oneshot;

use crate::error::error_document;
use crate::notation::{default_table, load_notation_table, NotationTable};
use crate::pipeline::{render, OutputFormat, View, CONTENT_TYPE_TEXT};
use crate::printer::PrintConfig;

pub const MAX_BODY_BYTES: usize = 8 * 1024 * 1024;
pub const TABLE_HEADER: &str = "X-Notation-Table";
pub const TABLES_ENV: &str = "STRICTMIZ_TABLES";
pub const DEFAULT_TABLE_NAME: &str = "default";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ServiceRequest {
    pub method: String,
    pub path: String,
    /// Raw query string without the leading `?`.
    pub query: Option<String>,
    /// Value of the `X-Notation-Table` header.
    pub table: Option<String>,
    pub body: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceResponse {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl ServiceResponse {
    fn ok(content_type: &'static str, body: String) -> ServiceResponse {
        ServiceResponse { status: 200, content_type, body: body.into_bytes() }
    }

    fn error(status: u16, category: &str, message: &str) -> ServiceResponse {
        ServiceResponse {
            status,
            content_type: CONTENT_TYPE_TEXT,
            body: error_document(category, 0, 0, message).into_bytes(),
        }
    }
}

/// Named notation tables available to requests.
#[derive(Clone, Debug)]
pub struct TableSet {
    tables: BTreeMap<String, NotationTable>,
}

impl Default for TableSet {
    fn default() -> TableSet {
        TableSet { tables: BTreeMap::from([(DEFAULT_TABLE_NAME.to_string(), default_table())]) }
    }
}

impl TableSet {
    /// The bundled table under the name `default`, plus every `<name>.tab` in
    /// `dir`. A `default.tab` in `dir` replaces the bundled one.
    pub fn load_dir(dir: &Path) -> io::Result<TableSet> {
        let mut set = TableSet::default();
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "tab"))
            .collect();
        paths.sort();
        for path in paths {
            let Some(name) = path.file_stem().and_then(|s| s.to_str()) else { continue };
            let source = std::fs::read_to_string(&path)?;
            let table = load_notation_table(&source).map_err(|e| {
                io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", path.display()))
            })?;
            set.tables.insert(name.to_string(), table);
        }
        Ok(set)
    }

    /// Tables from the directory named by `STRICTMIZ_TABLES`, or just the bundled default.
    pub fn from_env() -> io::Result<TableSet> {
        match std::env::var_os(TABLES_ENV) {
            Some(dir) => TableSet::load_dir(Path::new(&dir)),
            None => Ok(TableSet::default()),
        }
    }

    pub fn insert(&mut self, name: &str, table: NotationTable) {
        self.tables.insert(name.to_string(), table);
    }

    pub fn get(&self, name: &str) -> Option<&NotationTable> {
        self.tables.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }
}

pub fn handle(request: &ServiceRequest, tables: &TableSet) -> ServiceResponse {
    let endpoint = request.path.as_str();
    if !matches!(endpoint, "/parse" | "/pretty" | "/wsm" | "/msm" | "/health") {
        return ServiceResponse::error(404, "not-found", &format!("no such endpoint `{endpoint}`"));
    }
    if !matches!(request.method.as_str(), "GET" | "POST") {
        return ServiceResponse::error(405, "method", &format!("method {} not allowed", request.method));
    }
    if request.body.len() > MAX_BODY_BYTES {
        return too_large();
    }

    let mut format = None;
    for pair in request.query.as_deref().unwrap_or("").split('&').filter(|p| !p.is_empty()) {
        let (key, value) = pair.split_once('=').unwrap_or((pair, ""));
        if key != "format" || !matches!(endpoint, "/wsm" | "/msm") {
            return ServiceResponse::error(400, "request", &format!("unknown query parameter `{key}`"));
        }
        if format.is_some() {
            return ServiceResponse::error(400, "request", "query parameter `format` given twice");
        }
        match value.parse::<OutputFormat>() {
            Ok(f) => format = Some(f),
            Err(message) => return ServiceResponse::error(400, "request", &message),
        }
    }
    let format = format.unwrap_or_default();

    if endpoint == "/health" {
        return ServiceResponse::ok(CONTENT_TYPE_TEXT, "ok\n".to_string());
    }

    let name = request.table.as_deref().unwrap_or(DEFAULT_TABLE_NAME);
    let Some(table) = tables.get(name) else {
        return ServiceResponse::error(400, "request", &format!("unknown notation table `{name}`"));
    };
    let Ok(text) = std::str::from_utf8(&request.body) else {
        return ServiceResponse::error(400, "encoding", "request body is not valid UTF-8");
    };
    let view = match endpoint {
        "/parse" => View::Parse,
        "/pretty" => View::Pretty(PrintConfig::default()),
        "/wsm" => View::Wsm(format),
        _ => View::Msm(format),
    };
    match render(view, text, "", table) {
        Ok(body) => ServiceResponse::ok(view.content_type(), body),
        Err(e) => ServiceResponse {
            status: 400,
            content_type: CONTENT_TYPE_TEXT,
            body: e.document().into_bytes(),
        },
    }
}

fn too_large() -> ServiceResponse {
    ServiceResponse::error(413, "request", &format!("request body exceeds {MAX_BODY_BYTES} bytes"))
}

fn into_http(r: ServiceResponse) -> Response {
    let mut resp = Response::new(Body::from(r.body));
    *resp.status_mut() = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    resp.headers_mut().insert(header::CONTENT_TYPE, HeaderValue::from_static(r.content_type));
    resp
}

async fn dispatch(State(tables): State<Arc<TableSet>>, req: Request) -> Response {
    let (parts, body) = req.into_parts();
    let declared = parts
        .headers
        .get(header::CONTENT_LENGTH)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.parse::<usize>().ok());
    if declared.is_some_and(|n| n > MAX_BODY_BYTES) {
        return into_http(too_large());
    }
    let Ok(bytes) = axum::body::to_bytes(body, MAX_BODY_BYTES).await else {
        return into_http(too_large());
    };
    let request = ServiceRequest {
        method: parts.method.as_str().to_string(),
        path: parts.uri.path().to_string(),
        query: parts.uri.query().map(str::to_string),
        table: parts.headers.get(TABLE_HEADER).and_then(|v| v.to_str().ok()).map(str::to_string),
        body: bytes.to_vec(),
    };
    let response = tokio::task::spawn_blocking(move || handle(&request, &tables)).await;
    into_http(response.unwrap_or_else(|_| ServiceResponse::error(500, "internal", "request handler panicked")))
}

pub fn router(tables: Arc<TableSet>) -> Router {
    Router::new().fallback(dispatch).with_state(tables)
}

/// Serves on an already bound listener until `shutdown` resolves.
pub async fn serve_listener(
    listener: TcpListener,
    tables: Arc<TableSet>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> io::Result<()> {
    axum::serve(listener, router(tables)).with_graceful_shutdown(shutdown).await
}

fn runtime() -> io::Result<tokio::runtime::Runtime> {
    tokio::runtime::Builder::new_multi_thread().enable_all().build()
}

/// Binds `0.0.0.0:port` and serves until Ctrl-C.
pub fn serve(port: u16, tables: TableSet) -> io::Result<()> {
    let rt = runtime()?;
    rt.block_on(async move {
        let listener = TcpListener::bind(("0.0.0.0", port)).await?;
        eprintln!("listening on {}", listener.local_addr()?);
        let ctrl_c = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        serve_listener(listener, Arc::new(tables), ctrl_c).await
    })
}

/// A server running on a background thread; stops when dropped.
pub struct BackgroundServer {
    addr: SocketAddr,
    stop: Option<oneshot::Sender<()>>,
    thread: Option<thread::JoinHandle<io::Result<()>>>,
}

impl BackgroundServer {
    /// Starts a server on `127.0.0.1` with an ephemeral port.
    pub fn start(tables: TableSet) -> io::Result<BackgroundServer> {
        let rt = runtime()?;
        let listener = rt.block_on(TcpListener::bind(("127.0.0.1", 0)))?;
        let addr = listener.local_addr()?;
        let (stop, stopped) = oneshot::channel::<()>();
        let thread = thread::spawn(move || {
            rt.block_on(serve_listener(listener, Arc::new(tables), async {
                let _ = stopped.await;
            }))
        });
        Ok(BackgroundServer { addr, stop: Some(stop), thread: Some(thread) })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }
}

impl Drop for BackgroundServer {
    fn drop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}
