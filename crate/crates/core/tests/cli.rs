use std::process::Command;

use jordan_osserman::cli::report::ReportJson;
use jordan_osserman::cli::spec::parse_tensor_spec;
use jordan_osserman::curvature::Signature;
use jordan_osserman::grassmann::Subspace;
use jordan_osserman::linalg::parse_rational;
use jordan_osserman::osserman::{fingerprint, Mode, VerdictKind};

fn josserman(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_josserman"))
        .args(args)
        .output()
        .unwrap();
    (
        output.status.code().unwrap(),
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
    )
}

const BAD_BIANCHI: &str = r#"{"signature":[0,4],"tensor":{"kind":"dense","components":[{"i":1,"j":2,"k":3,"l":4,"value":"1"}]}}"#;

/// Curvature of a round 2-plane inside (0,3): Ricci is diag(1,1,0).
const NOT_EINSTEIN: &str = r#"{"signature":[0,3],"tensor":{"kind":"dense","components":[
    {"i":1,"j":2,"k":2,"l":1,"value":"1"},{"i":2,"j":1,"k":1,"l":2,"value":"1"},
    {"i":1,"j":2,"k":1,"l":2,"value":"-1"},{"i":2,"j":1,"k":2,"l":1,"value":"-1"}]}}"#;

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["check", "phi-a(4,4,a=1)"], 0),
        (&["check", BAD_BIANCHI], 2),
        (&["check", NOT_EINSTEIN], 0),
        (&["check", "phi-a(4,4,a=3)"], 2),
        (&["check", "nonsense"], 2),
        (&["check", "/no/such/spec.json"], 2),
        (
            &["jacobi", "constant-sectional(0,3)", "--subspace", "s1"],
            0,
        ),
        (
            &["jacobi", "constant-sectional(1,1)", "--subspace", "[[1,1]]"],
            2,
        ),
        (
            &["jacobi", "constant-sectional(1,1)", "--subspace", "t2"],
            2,
        ),
        (
            &[
                "scan",
                "phi-a(2,2,a=1)",
                "--samples",
                "2",
                "--expect-theorem24",
            ],
            0,
        ),
        (&["scan", "constant-sectional(1,2)", "--samples", "2"], 0),
        (
            &["scan", "constant-sectional(1,2)", "--expect-theorem24"],
            2,
        ),
        (&["scan", "phi-a(2,2,a=1)", "--format", "yaml"], 2),
        (&["witness", "phi-a(4,4,a=2)", "--type", "1,1"], 0),
        (
            &[
                "witness",
                "phi-a(4,4,a=2)",
                "--type",
                "4,0",
                "--samples",
                "2",
            ],
            0,
        ),
        (&["witness", "phi-a(4,4,a=2)", "--type", "4,4"], 2),
        (
            &[
                "witness",
                "constant-sectional(1,2)",
                "--type",
                "1,1",
                "--samples",
                "3",
            ],
            0,
        ),
        (&["duality", "phi-a(2,2,a=1)", "--samples", "4"], 0),
        (
            &[
                "duality",
                "constant-sectional(2,1)",
                "--samples",
                "4",
                "--sampler",
                "box",
            ],
            0,
        ),
        (&["duality", NOT_EINSTEIN, "--samples", "2"], 2),
        (&[], 2),
        (&["--help"], 0),
        (&["--version"], 0),
    ];
    for (args, expected) in cases {
        let (code, out, err) = josserman(args);
        assert_eq!(code, *expected, "{args:?}\nstdout:\n{out}\nstderr:\n{err}");
    }
}

#[test]
fn corners_only_grid() {
    let (code, out, _) = josserman(&[
        "scan",
        "phi-a(4,4,a=1)",
        "--expect-theorem24",
        "--ascii",
        "--samples",
        "2",
    ]);
    assert_eq!(code, 0);
    let picture = "  4 | * o o o -\n  3 | o o o o o\n  2 | o o o o o\n  1 | o o o o o\n  0 | - o o o *\n    +----------\n      0 1 2 3 4  r\n";
    assert!(out.contains(picture), "{out}");
    assert!(out.contains("matches the expected picture"));
}

#[test]
fn witness_prints_both_ranks() {
    let (code, out, _) = josserman(&["witness", "phi-a(4,4,a=2)", "--type", "1,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("sigma1: span{t1,s1}, rank J = 0"), "{out}");
    assert!(out.contains("sigma2: span{t2,s1}, rank J = 2"), "{out}");
    assert!(out.contains("rank gap: 2 (expected 2)"), "{out}");
}

#[test]
fn check_reports_violation_and_einstein_constant() {
    let (_, _, err) = josserman(&["check", BAD_BIANCHI]);
    assert!(err.contains("R[1][2][3][4]"), "{err}");
    let (_, out, _) = josserman(&["check", "skew(0,4,square=-1)"]);
    assert!(out.contains("Einstein: rho = 3 g"), "{out}");
    let (_, out, _) = josserman(&["check", NOT_EINSTEIN]);
    assert!(out.contains("Einstein: no"), "{out}");
}

#[test]
fn jacobi_report() {
    let (_, out, _) = josserman(&["jacobi", "constant-sectional(0,3)", "--subspace", "s1"]);
    let expected = "tensor: R_Id on (0,3)\nsubspace: span{s1}, type (0,1)\nJ =\n[0 0 0]\n[0 1 0]\n[0 0 1]\n\
                    char poly: λ^3 - 2λ^2 + λ\nrank sequence: 3, 2, 2\nJordan fingerprint: {0 -> 1; 1 -> 1^2}\n";
    assert_eq!(out, expected);
}

#[test]
fn spec_from_file() {
    let dir = std::env::temp_dir().join(format!("josserman-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(
        &path,
        r#"{"signature":[4,4],"tensor":{"kind":"phi-a","a":2}}"#,
    )
    .unwrap();
    let (code, out, _) = josserman(&["check", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 0);
    assert!(out.contains("R_Phi_2 on (4,4)"));
    assert!(out.contains("Einstein: rho = 0 g"));
}

#[test]
fn markdown_table() {
    let (code, out, _) = josserman(&[
        "scan",
        "phi-a(2,2,a=1)",
        "--format",
        "md",
        "--ascii",
        "--samples",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("| s=1 | * | o | * |"), "{out}");
}

fn reverify(spec: &str, samples: &str) -> usize {
    let (code, out, _) = josserman(&["scan", spec, "--format", "json", "--samples", samples]);
    assert_eq!(code, 0);
    let report: ReportJson = serde_json::from_str(&out).unwrap();
    let r = parse_tensor_spec(spec).unwrap().build().unwrap();
    let sig = Signature::new(report.signature[0], report.signature[1]).unwrap();
    let mut witnesses = 0;
    for cell in &report.cells {
        for (mode, verdict) in [
            (Mode::Osserman, &cell.osserman),
            (Mode::Jordan, &cell.jordan),
        ] {
            let Some(w) = &verdict.witness else {
                assert_ne!(verdict.kind, VerdictKind::RefutedWithWitness);
                continue;
            };
            assert_eq!(verdict.kind, VerdictKind::RefutedWithWitness);
            let mut found = vec![];
            for side in [&w.sigma1, &w.sigma2] {
                let basis = side
                    .basis
                    .iter()
                    .map(|v| v.iter().map(|x| parse_rational(x).unwrap()).collect())
                    .collect();
                let sigma = Subspace::new(sig, basis).unwrap();
                let inertia = sigma.signature();
                assert_eq!(
                    (inertia.neg, inertia.pos, inertia.null),
                    (cell.r, cell.s, 0)
                );
                let fp = fingerprint(&r, &sigma, mode).unwrap().to_string();
                assert_eq!(fp, side.fingerprint);
                found.push(fp);
            }
            assert_ne!(found[0], found[1]);
            witnesses += 1;
        }
    }
    witnesses
}

#[test]
fn json_witnesses_reverify() {
    // 23 admissible cells, two of them starred
    assert_eq!(reverify("phi-a(4,4,a=1)", "2"), 21);
    let combo = r#"{"signature":[0,4],"tensor":{"kind":"linear-combination","terms":[
        {"coef":"1","base":{"kind":"constant-sectional"}},
        {"coef":"1","base":{"kind":"skew","phi":{"kind":"standard","square":"-1"}}}]}}"#;
    assert!(reverify(combo, "5") >= 1);
}

#[test]
fn json_is_deterministic() {
    let args = [
        "scan",
        "phi-a(2,2,a=1)",
        "--format",
        "json",
        "--samples",
        "4",
        "--seed",
        "9",
    ];
    let (_, first, _) = josserman(&args);
    let (_, second, _) = josserman(&args);
    assert_eq!(first, second);
    let (_, other_seed, _) = josserman(&[
        "scan",
        "phi-a(2,2,a=1)",
        "--format",
        "json",
        "--samples",
        "4",
        "--seed",
        "10",
    ]);
    assert_ne!(first, other_seed);
}

fn kinds(schema: &serde_json::Value, def: &str) -> Vec<String> {
    schema["$defs"][def]["oneOf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| {
            v["properties"]["kind"]["const"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect()
}

#[test]
fn shipped_schema_names_every_kind() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/tensor-spec.schema.json"
    ))
    .unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    let tensors = [
        r#"{"kind":"constant-sectional"}"#,
        r#"{"kind":"skew","phi":{"kind":"standard","square":"-1"}}"#,
        r#"{"kind":"phi-a","a":1}"#,
        r#"{"kind":"dense","components":[]}"#,
        r#"{"kind":"linear-combination","terms":[{"coef":"-1/2","base":{"kind":"constant-sectional"}}]}"#,
        r#"{"kind":"skew","phi":{"kind":"matrix","entries":[["0","1","0","0"],["-1","0","0","0"],["0","0","0","1"],["0","0","-1","0"]]}}"#,
    ];
    let mut tensor_kinds = vec![];
    let mut phi_kinds = vec![];
    for t in tensors {
        let spec = parse_tensor_spec(&format!(r#"{{"signature":[2,2],"tensor":{t}}}"#)).unwrap();
        spec.build().unwrap();
        let v: serde_json::Value = serde_json::from_str(t).unwrap();
        tensor_kinds.push(v["kind"].as_str().unwrap().to_string());
        if let Some(phi) = v.get("phi") {
            phi_kinds.push(phi["kind"].as_str().unwrap().to_string());
        }
    }
    tensor_kinds.sort();
    tensor_kinds.dedup();
    let mut expected = kinds(&schema, "tensor");
    expected.sort();
    assert_eq!(tensor_kinds, expected);
    phi_kinds.sort();
    let mut expected = kinds(&schema, "phi");
    expected.sort();
    assert_eq!(phi_kinds, expected);
}
