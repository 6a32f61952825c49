//! Golden script tests: frozen text output, byte-determinism, text/JSON
//! agreement, and process-level exit codes.

use rees_blowup::parser::parse_polynomial;
use rees_blowup::ring::{MonomialOrder, RingContext};
use rees_blowup_cli::{format_records, run_script, session_field, Options};

fn run_text(script: &str) -> String {
    let records = run_script(script, &Options::default()).expect("script runs");
    format_records(&records, false)
}

fn run_json(script: &str) -> String {
    let records = run_script(script, &Options::default()).expect("script runs");
    format_records(&records, true)
}

#[test]
fn golden_regular_embedding_is_t_regular() {
    let script = "ring A QQ [x:0, y:0]\nideal I in A = [x, y]\nrees R = A I\ntreg R\n";
    let expected = "\
> ring A QQ [x:0, y:0]
A = QQ[x:0, y:0]
> ideal I in A = [x, y]
I = (x, y)
> rees R = A I
R = QQ[x:0, y:0, v1:1, v2:1, u:-1] / (v1*u - x, v2*u - y)
variables: v = [v1, v2], u = u (t^-1)
> treg R
t-regular: true
";
    assert_eq!(run_text(script), expected);
}

#[test]
fn golden_dual_numbers_regularization() {
    let script = "ring D QQ [e:0] mod [e^2]\nideal I in D = [e]\nrees R = D I\nregularize R\ntreg R\n";
    let expected = "\
> ring D QQ [e:0] mod [e^2]
D = QQ[e:0] / (e^2)
> ideal I in D = [e]
I = (e)
> rees R = D I
R = QQ[e:0, v1:1, u:-1] / (e^2, v1*u - e)
variables: v = [v1], u = u (t^-1)
> regularize R
regularized = QQ[e:0, v1:1, u:-1] / (v1*u - e, v1^2, e*v1, e^2)
kernel = (v1^2, e*v1)
stabilized at: 2
zero ring: false
> treg R
t-regular: false
obstruction = (e*v1)
";
    assert_eq!(run_text(script), expected);
}

#[test]
fn golden_origin_blow_up_atlas() {
    let script = "ring A QQ [x:0, y:0]\nideal I in A = [x, y]\nblowup BL = A I\nempty BL\ntwist BL 1\n";
    let expected = "\
> ring A QQ [x:0, y:0]
A = QQ[x:0, y:0]
> ideal I in A = [x, y]
I = (x, y)
> blowup BL = A I
atlas BL: 2 charts
chart 1 at v1: QQ[x:0, y:0, w:0] / (x*w - y); exceptional: x
chart 2 at v2: QQ[x:0, y:0, w:0] / (y*w - x); exceptional: y
generators generate B+: true
transitions consistent: true
empty: false
> empty BL
empty: false
> twist BL 1
twist(1):
g[1->2] = w
g[2->1] = w
";
    assert_eq!(run_text(script), expected);
}

#[test]
fn golden_degenerate_blow_ups() {
    let script = "\
ring A QQ [x:0]
ideal Z in A = []
ideal U in A = [1]
blowup EMPTY = A Z
empty EMPTY
blowup UNIT = A U
empty UNIT
";
    let expected = "\
> ring A QQ [x:0]
A = QQ[x:0]
> ideal Z in A = []
Z = ()
> ideal U in A = [1]
U = (1)
> blowup EMPTY = A Z
atlas EMPTY: 0 charts
generators generate B+: true
transitions consistent: true
empty: true
> empty EMPTY
empty: true
> blowup UNIT = A U
atlas UNIT: 1 chart
chart 1 at v1: QQ[x:0]; exceptional: 1
generators generate B+: true
transitions consistent: true
empty: false
> empty UNIT
empty: false
";
    assert_eq!(run_text(script), expected);
}

#[test]
fn scripts_are_deterministic_across_runs() {
    let script = "\
ring A QQ [x:0, y:0]
ideal I in A = [x, y]
rees R = A I
nonneg N = R
cone C = R
compare-classical R
deform R 2
deform R 0
exceptional E = A I
";
    assert_eq!(run_text(script), run_text(script));
    assert_eq!(run_json(script), run_json(script));
}

/// Text and JSON payloads denote the same objects: every generator string
/// re-parses (in the record's own context) back to itself.
#[test]
fn json_generators_round_trip() {
    let script = "\
ring A QQ [x:0, y:0]
ideal I in A = [x, y]
ideal J in A = [x^2 - 1, x*y - 1]
gb J
rees R = A I
regularize R
nonneg N = R
blowup BL = A I
";
    let records = run_script(script, &Options::default()).unwrap();
    let mut checked = 0usize;
    for record in &records {
        let Some(object) = record.json.as_object() else {
            continue;
        };
        let Some(context) = object.get("context") else {
            continue;
        };
        let field = session_field(context["field"].as_str().unwrap()).unwrap();
        let vars: Vec<(String, i64)> = context["vars"]
            .as_array()
            .unwrap()
            .iter()
            .map(|pair| {
                (
                    pair[0].as_str().unwrap().to_string(),
                    pair[1].as_i64().unwrap(),
                )
            })
            .collect();
        let ctx = RingContext::new(field, vars, MonomialOrder::GrevLex).unwrap();
        for g in object["generators"].as_array().unwrap() {
            let text = g.as_str().unwrap();
            let parsed = parse_polynomial(text, &ctx).unwrap();
            assert_eq!(parsed.to_string(), text, "in record `{}`", record.command);
            checked += 1;
        }
    }
    assert!(checked >= 8, "round-trip exercised {checked} generators");
}

#[test]
fn wide_command_coverage_script_runs() {
    let script = "\
ring A QQ [x:0, y:0]
graded B QQ [v1:1, v2:1] mod [v1*v2]
ideal I in A = [x, y]
ideal J in A = [x^2 - 1, x*y - 1]
gb J
nf J x^2
member I x^2 + y
quotient Q = I : J
intersect M = I J
saturate S = I x
eliminate E = J [x]
kernel K in A = [a, b] -> [x^2, x^3]
regseq A [x, y]
ann A x
hilbert B 0 4
piece B 2
split B
chart C1 = B at v1
veronese V = B 2
gendeg1 B
rees R = A I
cone CO = R
regularize RG = R
treg R
compare-classical R
naturality base R A [x, y]
naturality target A [x] [y]
nonneg N = R
proj P = N [v1, v2]
twist P 1
blowup BL = A I
exceptional EX = A I
empty EX
deform R 1
deform R 0
"
    .to_string();
    let records = run_script(&script, &Options::default()).expect("all commands execute");
    assert_eq!(records.len(), 35);
}

#[test]
fn rebinding_a_name_is_an_error() {
    let err = run_script(
        "ring A QQ [x:0]\nring A QQ [y:0]\n",
        &Options::default(),
    )
    .unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.message.contains("already bound"));
}

#[test]
fn alias_t_inverse_is_parsed_in_scripts() {
    let script = "\
ring A QQ [x:0]
ideal I in A = [x]
rees R = A I
graded Q QQ [x:0, v:1, u:-1] mod [v*t^-1 - x]
";
    // the alias only exists on the Rees context; the `graded` line declares
    // its own u and must fail to resolve `t^-1`
    let err = run_script(script, &Options::default()).unwrap_err();
    assert_eq!(err.line, 4);
}

#[test]
fn process_exit_codes() {
    use std::process::{Command, Stdio};
    let bin = env!("CARGO_BIN_EXE_rees-blowup");

    // success
    let ok = Command::new(bin)
        .arg("-")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .as_mut()
                .unwrap()
                .write_all(b"ring A QQ [x:0]\n")?;
            child.wait_with_output()
        })
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // script error: unknown command, diagnostic names the line
    let bad = Command::new(bin)
        .arg("-")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child
                .stdin
                .as_mut()
                .unwrap()
                .write_all(b"ring A QQ [x:0]\nnonsense here\n")?;
            child.wait_with_output()
        })
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");

    // I/O error: missing script file
    let missing = Command::new(bin)
        .arg("/nonexistent/script.rbs")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(3));
}
