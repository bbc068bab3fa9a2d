//! Sessions and their on-disk store: one JSON file per session.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use tripoem_core::design::{construct_sts, is_fano, Resolution, TripleSystem};
use tripoem_core::error::ScaffoldError;
use tripoem_core::graph::{export_graph, to_decomposition, ExportFormat};
use tripoem_core::interchange::SystemDocument;
use tripoem_core::poem::{
    scaffold, validate_poem, Finding, KeywordMap, Poem, PoemLine, PoemRules, Token,
    ValidationReport, Variant, Verdict,
};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("unknown session {0}")]
    NotFound(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("session store I/O: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt session file {path}: {message}")]
    Corrupt { path: PathBuf, message: String },
}

/// A poem being composed against a fixed triple structure.
#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub keywords: KeywordMap,
    pub variant: Variant,
    pub seed: u64,
    pub system: TripleSystem,
    pub resolution: Option<Resolution>,
    pub draft: Poem,
    pub revision: u64,
    pub updated_at: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DraftRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default)]
    pub rules: Vec<String>,
    pub stanzas: Vec<Vec<String>>,
}

/// Persisted form of a [`Session`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub keywords: Vec<String>,
    pub variant: Variant,
    pub seed: u64,
    pub system: SystemDocument,
    pub draft: DraftRecord,
    pub revision: u64,
    pub updated_at: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionSummary {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub variant: Variant,
    pub keywords: Vec<String>,
    pub revision: u64,
    pub updated_at: String,
}

/// What `GET /sessions/{id}` returns.
#[derive(Debug, Clone, Serialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub record: SessionRecord,
    pub report: ValidationReport,
    /// The draft's lines form a Fano plane.
    pub fano: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineFindings {
    pub stanza: usize,
    pub line: usize,
    pub text: String,
    /// Tagged tokens, for keyword highlighting.
    pub tokens: Vec<Token>,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalChanges {
    pub added: Vec<Finding>,
    pub resolved: Vec<Finding>,
}

/// Result of one line edit.
#[derive(Debug, Clone, Serialize)]
pub struct LineUpdate {
    pub revision: u64,
    pub verdict: Verdict,
    pub fano: bool,
    pub line: LineFindings,
    pub global: GlobalChanges,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportBundle {
    pub format: &'static str,
    pub poem: String,
    pub report: ValidationReport,
    pub graph: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NewSession {
    pub keywords: Keywords,
    pub variant: Variant,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub rules: Vec<String>,
}

/// Keywords as a JSON list or one comma-separated string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Keywords {
    List(Vec<String>),
    Joined(String),
}

impl Keywords {
    fn into_list(self) -> Vec<String> {
        match self {
            Keywords::List(words) => words,
            Keywords::Joined(s) => s
                .split(',')
                .map(|w| w.trim().to_owned())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn new_id() -> String {
    URL_SAFE_NO_PAD.encode(rand::random::<u128>().to_le_bytes())
}

fn fano(report: &ValidationReport) -> bool {
    is_fano(report.derived_system()).unwrap_or(false)
}

fn parse_rules(flags: &[String]) -> Result<PoemRules, String> {
    PoemRules::parse_list(&flags.join(","))
}

impl Session {
    pub fn create(request: NewSession) -> Result<Session, StoreError> {
        let words = request.keywords.into_list();
        let keywords =
            KeywordMap::new(&words).map_err(|e| StoreError::Unprocessable(e.to_string()))?;
        let rules = parse_rules(&request.rules).map_err(StoreError::Unprocessable)?;
        let mut draft = scaffold(&keywords, request.variant, request.seed).map_err(|e| match e {
            ScaffoldError::Keywords(k) => StoreError::Unprocessable(format!(
                "{k}: a triple poem needs a keyword count that leaves remainder 1 or 3 on division by 6"
            )),
            other => StoreError::Unprocessable(other.to_string()),
        })?;
        draft.title = request.title;
        draft.rules = rules;

        // the scaffold's structure is the session's system
        let (system, resolution) = if request.variant.is_resolvable() {
            let classes = draft
                .stanzas
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|l| {
                            let p = l.keyword_set();
                            tripoem_core::design::Triple::new(p[0], p[1], p[2])
                                .expect("scaffold lines carry three keywords")
                        })
                        .collect()
                })
                .collect::<Vec<_>>();
            let triples = classes.iter().flatten().copied().collect();
            let system =
                TripleSystem::new(keywords.order(), triples).expect("scaffold points are in range");
            let resolution = Resolution::new(system.clone(), classes)
                .expect("scaffold stanzas are parallel classes");
            (system, Some(resolution))
        } else {
            let system = construct_sts(keywords.order().get(), request.seed)
                .map_err(|e| StoreError::Unprocessable(e.to_string()))?;
            (system, None)
        };

        Ok(Session {
            id: new_id(),
            keywords,
            variant: request.variant,
            seed: request.seed,
            system,
            resolution,
            draft,
            revision: 0,
            updated_at: now(),
        })
    }

    pub fn report(&self) -> ValidationReport {
        validate_poem(&self.draft)
    }

    pub fn record(&self) -> SessionRecord {
        let system = match &self.resolution {
            Some(r) => SystemDocument::from_resolution(r, self.keywords.words()),
            None => SystemDocument::from_system(&self.system, self.keywords.words()),
        };
        SessionRecord {
            id: self.id.clone(),
            keywords: self.keywords.words().to_vec(),
            variant: self.variant,
            seed: self.seed,
            system,
            draft: DraftRecord {
                title: self.draft.title.clone(),
                rules: self
                    .draft
                    .rules
                    .to_list()
                    .into_iter()
                    .map(str::to_owned)
                    .collect(),
                stanzas: self
                    .draft
                    .stanzas
                    .iter()
                    .map(|s| s.iter().map(|l| l.source_text.clone()).collect())
                    .collect(),
            },
            revision: self.revision,
            updated_at: self.updated_at.clone(),
        }
    }

    pub fn from_record(record: SessionRecord) -> Result<Session, String> {
        let keywords = KeywordMap::new(&record.keywords).map_err(|e| e.to_string())?;
        let loaded = record.system.load().map_err(|e| e.to_string())?;
        loaded.system.ensure_valid().map_err(|e| e.to_string())?;
        if loaded.points != record.keywords {
            return Err("system points differ from session keywords".to_owned());
        }
        let rules = parse_rules(&record.draft.rules)?;
        let stanzas = record
            .draft
            .stanzas
            .iter()
            .map(|s| {
                s.iter()
                    .map(|text| PoemLine::parse(text, &keywords))
                    .collect()
            })
            .collect();
        let draft = Poem {
            title: record.draft.title,
            after: None,
            variant: record.variant,
            keywords: keywords.clone(),
            rules,
            stanzas,
        };
        Ok(Session {
            id: record.id,
            keywords,
            variant: record.variant,
            seed: record.seed,
            system: loaded.system,
            resolution: loaded.resolution,
            draft,
            revision: record.revision,
            updated_at: record.updated_at,
        })
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            id: self.id.clone(),
            title: self.draft.title.clone(),
            variant: self.variant,
            keywords: self.keywords.words().to_vec(),
            revision: self.revision,
            updated_at: self.updated_at.clone(),
        }
    }

    pub fn view(&self) -> SessionView {
        let report = self.report();
        SessionView {
            record: self.record(),
            fano: fano(&report),
            report,
        }
    }

    /// Replaces one line (1-based locator) and reports what changed.
    pub fn update_line(
        &mut self,
        stanza: usize,
        line: usize,
        text: &str,
    ) -> Result<LineUpdate, StoreError> {
        let out_of_range = || {
            StoreError::Unprocessable(format!(
                "no line {line} in stanza {stanza}; the draft has {} stanzas",
                self.draft.stanzas.len()
            ))
        };
        if stanza == 0 || line == 0 {
            return Err(out_of_range());
        }
        let (s, l) = (stanza - 1, line - 1);
        if self.draft.stanzas.get(s).and_then(|st| st.get(l)).is_none() {
            return Err(out_of_range());
        }
        if text.contains('\n') || text.contains('\r') {
            return Err(StoreError::Unprocessable(
                "line text must be a single line".to_owned(),
            ));
        }

        let before = self.report();
        self.draft.set_line(s, l, text).expect("locator checked");
        self.revision += 1;
        self.updated_at = now();
        let after = self.report();

        let at_line =
            |f: &Finding| f.location.stanza == Some(stanza) && f.location.line == Some(line);
        let line_findings: Vec<Finding> = after
            .findings
            .iter()
            .filter(|f| at_line(f))
            .cloned()
            .collect();
        let old_global: Vec<&Finding> = before.findings.iter().filter(|f| !at_line(f)).collect();
        let new_global: Vec<&Finding> = after.findings.iter().filter(|f| !at_line(f)).collect();
        let added = new_global
            .iter()
            .filter(|f| !old_global.contains(f))
            .map(|f| (*f).clone())
            .collect();
        let resolved = old_global
            .iter()
            .filter(|f| !new_global.contains(f))
            .map(|f| (*f).clone())
            .collect();

        Ok(LineUpdate {
            revision: self.revision,
            verdict: after.verdict,
            fano: fano(&after),
            line: LineFindings {
                stanza,
                line,
                text: self.draft.stanzas[s][l].source_text.clone(),
                tokens: self.draft.stanzas[s][l].tokens.clone(),
                findings: line_findings,
            },
            global: GlobalChanges { added, resolved },
        })
    }

    /// The `.poem` text alone, or a bundle with report and graph.
    pub fn export(&self, format: &str) -> Result<Export, StoreError> {
        let poem = self.draft.to_text();
        if format == "poem" {
            return Ok(Export::Poem(poem));
        }
        let graph_format: ExportFormat = format.parse().map_err(|_| {
            StoreError::Unprocessable(format!(
                "unknown export format {format:?}; supported formats: poem, dot, tikz, json"
            ))
        })?;
        let decomp = to_decomposition(&self.system, self.keywords.words())
            .expect("session systems are valid");
        let graph = export_graph(&decomp, graph_format).expect("decomposition is valid");
        Ok(Export::Bundle(ExportBundle {
            format: match graph_format {
                ExportFormat::Dot => "dot",
                ExportFormat::Tikz => "tikz",
                ExportFormat::Json => "json",
            },
            poem,
            report: self.report(),
            graph,
        }))
    }
}

#[derive(Debug, Clone)]
pub enum Export {
    Poem(String),
    Bundle(ExportBundle),
}

/// Sessions keyed by id. Each session has its own lock, so edits to one
/// session are applied (and persisted) one at a time in arrival order.
#[derive(Debug, Default)]
pub struct SessionStore {
    dir: Option<PathBuf>,
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        SessionStore::default()
    }

    /// Opens `dir`, creating it if needed, and loads every `*.json` in it.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = BTreeMap::new();
        let mut paths: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let corrupt = |message: String| StoreError::Corrupt {
                path: path.clone(),
                message,
            };
            let text = fs::read_to_string(&path)?;
            let record: SessionRecord =
                serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
            let session = Session::from_record(record).map_err(corrupt)?;
            sessions.insert(session.id.clone(), Arc::new(Mutex::new(session)));
        }
        Ok(SessionStore {
            dir: Some(dir),
            sessions: RwLock::new(sessions),
        })
    }

    fn persist(&self, session: &Session) -> Result<(), StoreError> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        write_record(dir, &session.record())
    }

    fn handle(&self, id: &str) -> Result<Arc<Mutex<Session>>, StoreError> {
        self.sessions
            .read()
            .expect("store lock")
            .get(id)
            .cloned()
            .ok_or_else(|| StoreError::NotFound(id.to_owned()))
    }

    pub fn create(&self, request: NewSession) -> Result<SessionView, StoreError> {
        let session = Session::create(request)?;
        self.persist(&session)?;
        let view = session.view();
        self.sessions
            .write()
            .expect("store lock")
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn list(&self) -> Vec<SessionSummary> {
        let handles: Vec<_> = self
            .sessions
            .read()
            .expect("store lock")
            .values()
            .cloned()
            .collect();
        handles
            .iter()
            .map(|h| h.lock().expect("session lock").summary())
            .collect()
    }

    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&Session) -> T,
    ) -> Result<T, StoreError> {
        let handle = self.handle(id)?;
        let session = handle.lock().expect("session lock");
        Ok(f(&session))
    }

    pub fn update_line(
        &self,
        id: &str,
        stanza: usize,
        line: usize,
        text: &str,
    ) -> Result<LineUpdate, StoreError> {
        let handle = self.handle(id)?;
        let mut session = handle.lock().expect("session lock");
        let mut next = session.clone();
        let update = next.update_line(stanza, line, text)?;
        self.persist(&next)?;
        *session = next;
        Ok(update)
    }
}

fn write_record(dir: &Path, record: &SessionRecord) -> Result<(), StoreError> {
    let path = dir.join(format!("{}.json", record.id));
    let tmp = dir.join(format!("{}.json.tmp", record.id));
    let mut text = serde_json::to_string_pretty(record).expect("record serializes");
    text.push('\n');
    fs::write(&tmp, text)?;
    fs::rename(&tmp, &path)?;
    Ok(())
}
