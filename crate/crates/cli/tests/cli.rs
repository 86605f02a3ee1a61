use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn multinet(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_multinet"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn gen(args: &[&str]) -> Vec<u8> {
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    let out = multinet(&all, None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn rotational_net_is_multi_circular() {
    let net = gen(&["rotational", "--profile-len", "5", "--angles", "8"]);
    let out = multinet(&["verify", "multi-circular"], Some(&net));
    assert_eq!(code(&out), 0);
    assert!(text(&out).contains("pass (8x5 net)"));
}

#[test]
fn reflection_net_is_multi_q() {
    let net = gen(&["reflect", "--seed", "11", "--nu", "7", "--nv", "6"]);
    assert_eq!(code(&multinet(&["verify", "multi-q"], Some(&net))), 0);
    assert_eq!(code(&multinet(&["--parallel", "verify", "multi-circular"], Some(&net))), 0);
}

#[test]
fn perturbed_net_reports_rectangles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    let net = gen(&["translation", "--nu", "3", "--nv", "3"]);
    let mut doc: serde_json::Value = serde_json::from_slice(&net).unwrap();
    // move vertex (2,2) off the translation surface
    let x = doc["data"][8][0].as_f64().unwrap();
    doc["data"][8][0] = serde_json::json!(x + 0.1);
    std::fs::write(&path, doc.to_string()).unwrap();

    let out = multinet(&["verify", "multi-q", path.to_str().unwrap()], None);
    assert_eq!(code(&out), 1, "{}", text(&out));
    let report = text(&out);
    assert!(report.contains("FAIL"));
    assert!(report.contains("rows 1..2 cols 1..2 residual"), "{report}");
    assert!(report.contains("rows 0..2 cols 0..2 residual"), "{report}");
    assert!(!report.contains("rows 0..1 cols 0..1 "), "{report}");
}

#[test]
fn malformed_input_exits_with_two() {
    for bad in [
        &b"{\"kind\": \"point_net\""[..],
        b"not json",
        b"{\"kind\":\"point_net\",\"ambient\":\"RP3\",\"dims\":[2,2],\"data\":[[1,0,0,1]]}",
        b"{\"kind\":\"point_net\",\"ambient\":\"RP9\",\"dims\":[1,1],\"data\":[[1,0,0,1]]}",
        b"",
    ] {
        let out = multinet(&["verify", "q"], Some(bad));
        assert_eq!(code(&out), 2);
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let planes = gen(&["conical"]);
    assert_eq!(code(&multinet(&["verify", "multi-q"], Some(&planes))), 2);
    assert_eq!(code(&multinet(&["gen", "translation", "--nu", "0"], None)), 2);
    assert_eq!(code(&multinet(&["verify", "nonsense"], None)), 2);
    assert_eq!(code(&multinet(&["verify", "q", "/nonexistent/net.json"], None)), 2);
}

#[test]
fn outputs_are_deterministic() {
    for kind in ["translation", "reflect", "cone", "qqstar", "cyclide-patch", "congruence", "conical"] {
        assert_eq!(gen(&[kind, "--seed", "5"]), gen(&[kind, "--seed", "5"]), "{kind}");
    }
    assert_ne!(gen(&["translation", "--seed", "5"]), gen(&["translation", "--seed", "6"]));

    let net = gen(&["translation", "--nu", "4", "--nv", "4", "--seed", "2"]);
    let seq = multinet(&["subdivide", "--scheme", "q", "--n", "3", "--rounds", "2"], Some(&net));
    let par = multinet(&["--parallel", "subdivide", "--scheme", "q", "--n", "3", "--rounds", "2"], Some(&net));
    assert_eq!(code(&seq), 0);
    assert_eq!(seq.stdout, par.stdout);
    let a = multinet(&["export", "--format", "obj"], Some(&seq.stdout));
    let b = multinet(&["export", "--format", "obj"], Some(&par.stdout));
    assert_eq!(a.stdout, b.stdout);
}

fn count(text: &str, prefix: &str) -> usize {
    text.lines().filter(|l| l.starts_with(prefix)).count()
}

#[test]
fn subdivided_mesh_has_one_vertex_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let coarse = dir.path().join("coarse.json");
    let fine = dir.path().join("fine.json");
    let obj = dir.path().join("fine.obj");
    let s = |p: &Path| p.to_str().unwrap().to_owned();
    assert_eq!(code(&multinet(&["gen", "rotational", "--angles", "3", "--profile-len", "4", "-o", &s(&coarse)], None)), 0);
    let out = multinet(&["subdivide", "--scheme", "circular", "--nu", "2", "--nv", "3", &s(&coarse), "-o", &s(&fine)], None);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&multinet(&["verify", "circular", &s(&fine)], None)), 0);
    assert_eq!(code(&multinet(&["export", "--format", "obj", &s(&fine), "-o", &s(&obj)], None)), 0);
    let mesh = std::fs::read_to_string(&obj).unwrap();
    // (3-1)*2+1 by (4-1)*3+1
    assert_eq!(count(&mesh, "v "), 5 * 10);
    assert_eq!(count(&mesh, "f "), 4 * 9);
}

#[test]
fn q_subdivision_with_seed_polylines() {
    let dir = tempfile::tempdir().unwrap();
    let seeds = dir.path().join("seeds.json");
    // unit square, data row-major: x(1,0) = (0,1,0); midpoints off-center
    let net = br#"{"kind":"point_net","ambient":"RP3","dims":[2,2],"data":[[0,0,0,1],[1,0,0,1],[0,1,0,1],[1,1,0,1]]}"#;
    std::fs::write(&seeds, r#"{"row":[[[0,0,0,1],[0,0.7,0,1],[0,1,0,1]]],"col":[[[0,0,0,1],[0.25,0,0,1],[1,0,0,1]]]}"#).unwrap();
    let out = multinet(&["subdivide", "--scheme", "q", "--n", "2", "--seeds", seeds.to_str().unwrap()], Some(net));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let body = text(&out);
    assert!(body.contains("\"dims\": [3, 3]") || body.contains("\"dims\":[3,3]"), "{body}");
    assert_eq!(code(&multinet(&["verify", "multi-q"], Some(body.as_bytes()))), 0);

    std::fs::write(&seeds, r#"{"row":[[[0,0,0,1],[0.1,0.7,0,1],[0,1,0,1]]],"col":[[[0,0,0,1],[0.25,0,0,1],[1,0,0,1]]]}"#).unwrap();
    let off = multinet(&["subdivide", "--scheme", "q", "--n", "2", "--seeds", seeds.to_str().unwrap()], Some(net));
    assert_eq!(code(&off), 2);
}

#[test]
fn classification_output() {
    let cyl = multinet(&["classify", "circular"], Some(&gen(&["cylinder", "--moebius", "--seed", "8"])));
    assert_eq!(code(&cyl), 0);
    assert!(text(&cyl).starts_with("class: Cylinder\n"));
    assert!(text(&cyl).contains("eigenvalues ["));
    let lie = multinet(&["classify", "congruence"], Some(&gen(&["congruence", "--model", "lie"])));
    assert!(text(&lie).starts_with("class: DupinCyclide"));
    let strip = multinet(&["classify", "gauss"], Some(&gen(&["conical", "--class", "strip"])));
    assert!(text(&strip).starts_with("class: SymmetricStrip"), "{}", text(&strip));
}

#[test]
fn mutated_inputs_never_crash() {
    let checks = ["q", "multi-q", "qstar", "multi-qstar", "circular", "multi-circular", "conical", "multi-conical", "congruence"];
    let sources = [gen(&["reflect", "--nu", "3", "--nv", "3"]), gen(&["conical", "--nu", "3", "--nv", "3"]), gen(&["congruence", "--nu", "3", "--nv", "3"])];
    let mut state = 0x9e37_79b9_u64;
    for (s, src) in sources.iter().enumerate() {
        for round in 0..12 {
            let mut bytes = src.clone();
            for _ in 0..1 + round % 3 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let k = (state >> 33) as usize % bytes.len();
                bytes[k] = b"0-e.,[]{}\"9 "[(state >> 20) as usize % 12];
            }
            let check = checks[(s * 12 + round) % checks.len()];
            let out = multinet(&["verify", check], Some(&bytes));
            assert!(matches!(code(&out), 0..=2), "{check}: {}", String::from_utf8_lossy(&out.stderr));
        }
        for check in checks {
            assert!(matches!(code(&multinet(&["verify", check], Some(src))), 0..=2));
        }
    }
}
