//! Whole-suite checks shared by the integration tests and the acceptance
//! runner. Each returns a short summary on success or the first failure.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::process::{Command, Stdio};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use strictmiz::ast::Article;
use strictmiz::notation::{default_table, load_notation_table};
use strictmiz::pipeline::{render, OutputFormat, View};
use strictmiz::printer::{pretty_with_overflow, PrintConfig};
use strictmiz::service::{BackgroundServer, TableSet};
use strictmiz::wsm::{parse_wsm, to_wsm};
use strictmiz::{parse_text, Error};

use super::{check_golden, check_msm_invariants, corpus, gen, oracle};

pub type Check = Result<String, String>;

pub const GENERATED_ARTICLES: u64 = 500;
pub const ORACLE_CASES: u64 = 3000;
pub const RELATION_INPUT: &str = "reserve P,R for Relation of X,Y;";
pub const RELATION_LINE: &str = "reserve P , R for ( Relation of X , Y ) ;";
pub const THEN_INPUT: &str = "reserve X, Y for set; A: X=X; then Y=Y;";

/// Parsed corpus articles followed by the generated ones, with a name each.
pub fn all_articles() -> Vec<(String, Article)> {
    let table = default_table();
    let mut out: Vec<(String, Article)> = corpus()
        .into_iter()
        .map(|(stem, text)| {
            let a = parse_text(&text, &table).unwrap_or_else(|e| panic!("{stem}: {e}"));
            (stem, a)
        })
        .collect();
    out.extend((0..GENERATED_ARTICLES).map(|seed| (format!("generated#{seed}"), gen::article(seed))));
    out
}

pub fn relation_line() -> Check {
    let table = load_notation_table("mode Relation 0 1 2").map_err(|e| e.to_string())?;
    let out = render(View::Wsm(OutputFormat::Text), RELATION_INPUT, "", &table).map_err(|e| e.to_string())?;
    if out == format!("{RELATION_LINE}\n") {
        Ok("byte-exact".into())
    } else {
        Err(format!("got {out:?}"))
    }
}

pub fn then_elimination() -> Check {
    let out = render(View::Msm(OutputFormat::Text), THEN_INPUT, "", &default_table()).map_err(|e| e.to_string())?;
    if out.split_whitespace().any(|t| t == "then") {
        return Err("`then` in output".into());
    }
    check_golden("then_elimination.msm", &out)?;
    Ok("matches golden".into())
}

pub fn wsm_idempotence(articles: &[(String, Article)]) -> Check {
    for (name, a) in articles {
        let text = to_wsm(a);
        let back = parse_wsm(&text).map_err(|e| format!("{name}: parse_wsm: {e}"))?;
        if to_wsm(&back) != text {
            return Err(format!("{name}: to_wsm is not idempotent"));
        }
        if back.without_positions() != a.without_positions() {
            return Err(format!("{name}: parse_wsm(to_wsm(a)) differs from a"));
        }
    }
    Ok(format!("{} articles", articles.len()))
}

/// `parse_wsm` takes no table at all; the check feeds it every corpus
/// article's WSM, including ones that use symbols missing from the default
/// table, and compares against the table-driven parse.
pub fn table_freeness() -> Check {
    let table = default_table();
    let mut count = 0;
    for (stem, text) in corpus() {
        let a = parse_text(&text, &table).map_err(|e| format!("{stem}: {e}"))?;
        let w = to_wsm(&a);
        let back = parse_wsm(&w).map_err(|e| format!("{stem}: {e}"))?;
        if back.without_positions() != a.without_positions() {
            return Err(format!("{stem}: table-free reading differs"));
        }
        count += 1;
    }
    // Symbols unknown to any table still read back.
    let foreign = "reserve A for ( Group of 7 ) ;\n( ( A ** A ) =~ frob ( A ) ) ;\n";
    let a = parse_wsm(foreign).map_err(|e| format!("foreign symbols: {e}"))?;
    if to_wsm(&a) != foreign {
        return Err("foreign symbols do not round-trip".into());
    }
    Ok(format!("{count} corpus outputs plus foreign symbols"))
}

pub fn msm_invariants(articles: &[(String, Article)]) -> Check {
    for (name, a) in articles {
        check_msm_invariants(a).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} articles", articles.len()))
}

pub fn disambiguation(cases: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut resolved, mut rejected) = (0, 0);
    for _ in 0..cases {
        let case = oracle::random_case(&mut rng);
        let table = load_notation_table(&case.table_source()).map_err(|e| e.to_string())?;
        let text = case.text();
        match (case.expected(), parse_text(&text, &table)) {
            (Some(want), Ok(a)) if oracle::observed(&a) == want => resolved += 1,
            (None, Err(Error::Resolution { .. })) => rejected += 1,
            (want, got) => {
                return Err(format!(
                    "{text:?} with arities {:?}: oracle {want:?}, parser {:?}",
                    case.arities,
                    got.map(|a| oracle::observed(&a))
                ))
            }
        }
    }
    Ok(format!("{resolved} resolved, {rejected} rejected"))
}

/// Re-parse equality on every article; overflow must be zero on the corpus.
pub fn pretty_fidelity(articles: &[(String, Article)]) -> Check {
    let table = default_table();
    let config = PrintConfig::default();
    let (mut corpus_overflow, mut generated_overflow) = (0, 0);
    for (name, a) in articles {
        let printed = pretty_with_overflow(a, &table, config);
        let back = parse_text(&printed.text, &table).map_err(|e| format!("{name}: re-parse: {e}\n{}", printed.text))?;
        if back.without_positions() != a.without_positions() {
            return Err(format!("{name}: parse(pretty(a)) differs from a\n{}", printed.text));
        }
        let long = printed.text.lines().filter(|l| l.chars().count() > config.max_width).count();
        if long != printed.overflow_lines {
            return Err(format!("{name}: {long} long lines but {} reported", printed.overflow_lines));
        }
        if name.starts_with("generated#") {
            generated_overflow += long;
        } else {
            corpus_overflow += long;
        }
    }
    if corpus_overflow > 0 {
        return Err(format!("{corpus_overflow} corpus lines exceed {}", config.max_width));
    }
    Ok(format!("{} articles, corpus overflow 0, generated overflow {generated_overflow}", articles.len()))
}

/// Minimal HTTP/1.1 exchange over a fresh connection.
pub fn http(addr: SocketAddr, method: &str, target: &str, headers: &[(&str, &str)], body: &[u8]) -> (u16, String, Vec<u8>) {
    let mut s = TcpStream::connect(addr).expect("connect");
    let mut head = format!("{method} {target} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\nContent-Length: {}\r\n", body.len());
    for (k, v) in headers {
        head.push_str(&format!("{k}: {v}\r\n"));
    }
    head.push_str("\r\n");
    s.write_all(head.as_bytes()).unwrap();
    s.write_all(body).unwrap();
    let mut raw = Vec::new();
    s.read_to_end(&mut raw).unwrap();
    let split = raw.windows(4).position(|w| w == b"\r\n\r\n").expect("header end");
    let head = String::from_utf8_lossy(&raw[..split]).into_owned();
    let mut body = raw[split + 4..].to_vec();
    let status = head.split(' ').nth(1).and_then(|s| s.parse().ok()).expect("status");
    let mut content_type = String::new();
    let mut chunked = false;
    for line in head.lines().skip(1) {
        let (k, v) = line.split_once(':').unwrap_or((line, ""));
        match k.trim().to_ascii_lowercase().as_str() {
            "content-type" => content_type = v.trim().to_string(),
            "transfer-encoding" => chunked = v.trim().eq_ignore_ascii_case("chunked"),
            _ => {}
        }
    }
    if chunked {
        body = dechunk(&body);
    }
    (status, content_type, body)
}

fn dechunk(mut raw: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    loop {
        let eol = raw.windows(2).position(|w| w == b"\r\n").expect("chunk size");
        let size = usize::from_str_radix(std::str::from_utf8(&raw[..eol]).unwrap().trim(), 16).unwrap();
        if size == 0 {
            return out;
        }
        out.extend_from_slice(&raw[eol + 2..eol + 2 + size]);
        raw = &raw[eol + 4 + size..];
    }
}

/// Runs the CLI binary; returns exit code, stdout and stderr.
pub fn cli(args: &[&str], stdin: &[u8]) -> (i32, Vec<u8>, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_strictmiz"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn strictmiz");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

const ENDPOINTS: [(&str, &[&str]); 6] = [
    ("/parse", &["parse"]),
    ("/pretty", &["pretty"]),
    ("/wsm", &["wsm"]),
    ("/wsm?format=xml", &["wsm", "--format", "xml"]),
    ("/msm", &["msm"]),
    ("/msm?format=xml", &["msm", "--format", "xml"]),
];

/// Every endpoint on every corpus article against the CLI on stdin, plus
/// error documents and the health check.
pub fn service_conformance() -> Check {
    let server = BackgroundServer::start(TableSet::default()).map_err(|e| e.to_string())?;
    let addr = server.addr();
    let mut exchanges = 0;
    for (stem, text) in corpus() {
        for (target, args) in ENDPOINTS {
            let (code, stdout, _) = cli(args, text.as_bytes());
            let (status, _, body) = http(addr, "POST", target, &[], text.as_bytes());
            exchanges += 1;
            let expected_status = if code == 0 { 200 } else { 400 };
            if status != expected_status {
                return Err(format!("{stem} {target}: status {status}, CLI exit {code}"));
            }
            if code == 0 && body != stdout {
                return Err(format!("{stem} {target}: body differs from CLI output"));
            }
        }
    }
    let bad = "reserve X for set;\nX = ;\n";
    let (code, _, stderr) = cli(&["wsm"], bad.as_bytes());
    let (status, _, body) = http(addr, "POST", "/wsm", &[], bad.as_bytes());
    if status != 400 || code != 1 || body != stderr || !body.starts_with(b"error: syntax\nline: 2\ncol: 5\n") {
        return Err(format!("error document mismatch: {}", String::from_utf8_lossy(&body)));
    }
    let (status, _, body) = http(addr, "GET", "/health", &[], b"");
    if status != 200 || body != b"ok\n" {
        return Err(format!("/health returned {status}"));
    }
    Ok(format!("{exchanges} exchanges, error document and /health"))
}

pub fn stats_golden() -> Check {
    let table = default_table();
    let texts: Vec<String> = corpus()
        .iter()
        .map(|(stem, text)| parse_text(text, &table).map(|a| to_wsm(&a)).map_err(|e| format!("{stem}: {e}")))
        .collect::<Result<_, _>>()?;
    let stats = strictmiz::cli::corpus_stats(texts.iter().map(String::as_str));
    check_golden("corpus_stats.txt", &stats.to_string())?;
    Ok(stats.to_string().trim_end().replace('\n', ", "))
}

pub const PERF_STATEMENTS: usize = 10_000;

/// Source text of the timing article; built outside the timed region.
pub fn perf_source() -> String {
    let a = gen::Gen::new(10_000).long_article(PERF_STATEMENTS);
    strictmiz::printer::pretty(&a, &default_table(), PrintConfig::default())
}

pub fn perf_run(source: &str) -> Check {
    let a = parse_text(source, &default_table()).map_err(|e| e.to_string())?;
    let w = to_wsm(&a);
    let statements = w.lines().filter(|l| !l.starts_with("reserve")).count();
    if statements < PERF_STATEMENTS {
        return Err(format!("only {statements} statements"));
    }
    Ok(format!("{statements} statements, {} bytes of WSM", w.len()))
}

/// Distinct articles map to distinct WSM texts.
pub fn wsm_injective(articles: &[(String, Article)]) -> Check {
    let mut seen = BTreeSet::new();
    let mut distinct = BTreeSet::new();
    for (_, a) in articles {
        let key = format!("{:?}", a.without_positions());
        if distinct.insert(key) && !seen.insert(to_wsm(a)) {
            return Err("two different articles share a WSM text".into());
        }
    }
    Ok(format!("{} distinct articles", distinct.len()))
}
