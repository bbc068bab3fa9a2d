use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(format!("{name}.poem"))
}

fn tripoem(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tripoem"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or_default()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_corpus() {
    for name in [
        "karak",
        "a_pause_in_the_rain",
        "footprints_on_a_snowy_evening",
        "wordstorm",
        "things_we_cannot_keep",
    ] {
        let path = corpus(name);
        let out = tripoem(&["validate", path.to_str().unwrap()], None);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        // piped stdout gets JSON
        assert_eq!(stdout_json(&out)["verdict"], "pass");
    }
}

#[test]
fn validate_failures() {
    let wordstorm = corpus("wordstorm");
    let out = tripoem(
        &[
            "validate",
            "--text",
            "--rules",
            "chain_last_to_first",
            wordstorm.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("error[chain]"), "{text}");
    assert!(text.contains("FAIL"), "{text}");

    let karak = std::fs::read_to_string(corpus("karak")).unwrap();
    let broken = karak.replace("Bird seeks home", "Bird seeks");
    assert_ne!(broken, karak);
    let out = tripoem(&["validate", "-"], Some(broken.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "fail");

    let out = tripoem(&["validate", "-"], Some(b"no header\n"));
    assert_eq!(out.status.code(), Some(2));
    let out = tripoem(
        &[
            "validate",
            "--rules",
            "rhyme",
            corpus("karak").to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = tripoem(&["validate", "/nonexistent.poem"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_rejects_inadmissible_order() {
    for u in ["6", "8", "2"] {
        let out = tripoem(&["generate", "--order", u], None);
        assert_eq!(out.status.code(), Some(2), "order {u}");
        assert!(out.stdout.is_empty());
    }
    let out = tripoem(&["generate", "--order", "6"], None);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("u mod 6 is 1 or 3"), "{err}");
}

#[test]
fn generate_then_resolve() {
    let generated = tripoem(&["generate", "--order", "9", "--seed", "1"], None);
    assert_eq!(generated.status.code(), Some(0));
    let out = tripoem(&["resolve", "-"], Some(&generated.stdout));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = stdout_json(&out);
    let classes = doc["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 4);
    assert!(classes.iter().all(|c| c.as_array().unwrap().len() == 3));
}

#[test]
fn resolve_reports_failure() {
    let generated = tripoem(&["generate", "--order", "7"], None);
    let out = tripoem(&["resolve"], Some(&generated.stdout));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("not resolvable"));

    let generated = tripoem(&["generate", "--order", "15"], None);
    let out = tripoem(&["resolve", "--budget", "10"], Some(&generated.stdout));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("10"));

    let out = tripoem(
        &["resolve"],
        Some(br#"{"order": 3, "points": ["a","b","c"], "triples": [[0,1]]}"#),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("triples[0]"));
}

#[test]
fn generate_with_keywords_and_classes() {
    let out = tripoem(
        &[
            "generate",
            "--keywords",
            "a, b, c, d, e, f, g, h, i",
            "--resolvable",
            "--seed",
            "3",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["points"][8], "i");
    assert_eq!(doc["classes"].as_array().unwrap().len(), 4);

    let out = tripoem(&["generate", "--order", "7", "--keywords", "a,b,c"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let karak = corpus("karak");
    let runs: [&[&str]; 5] = [
        &["generate", "--order", "15", "--seed", "42"],
        &[
            "scaffold",
            "--keywords",
            "a,b,c,d,e,f,g,h,i",
            "--variant",
            "resolvable-pure",
            "--seed",
            "5",
        ],
        &["export", "--format", "dot", karak.to_str().unwrap()],
        &["export", "--format", "tikz", karak.to_str().unwrap()],
        &["export", "--format", "json", karak.to_str().unwrap()],
    ];
    for args in runs {
        let a = tripoem(args, None);
        let b = tripoem(args, None);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn scaffold_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("draft.poem");
    let out = tripoem(
        &[
            "scaffold",
            "--keywords",
            "Rain,Man,Coffee,Cold,Wet,Bird,Wonder",
            "--variant",
            "pure",
            "--title",
            "Draft",
            "-o",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("#! title: Draft\n"));
    let out = tripoem(&["validate", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));

    let out = tripoem(
        &[
            "scaffold",
            "--keywords",
            "a,b,c,d,e,f,g",
            "--variant",
            "resolvable-relaxed",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = tripoem(
        &[
            "scaffold",
            "--keywords",
            "a,b,c,d,e,f,g",
            "--variant",
            "limerick",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_system_and_poem_agree() {
    let karak = std::fs::read(corpus("karak")).unwrap();
    let from_poem = tripoem(&["export", "-f", "json", "-"], Some(&karak));
    assert_eq!(from_poem.status.code(), Some(0));
    let graph = stdout_json(&from_poem);
    assert_eq!(graph["order"], 7);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 21);

    // re-export the same triples from a system document
    let doc = serde_json::json!({
        "order": graph["order"],
        "points": graph["points"],
        "triples": graph["triples"],
    });
    let from_system = tripoem(&["export", "-f", "json"], Some(doc.to_string().as_bytes()));
    assert_eq!(from_system.stdout, from_poem.stdout);

    let out = tripoem(&["export", "-f", "svg", "-"], Some(&karak));
    assert_eq!(out.status.code(), Some(2));
}
