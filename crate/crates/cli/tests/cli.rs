use serde_json::Value;
use vfilt_cli::run;

fn job(args: &str) -> (i32, Value) {
    let out = run(std::iter::once("vfilt").chain(args.split_whitespace()));
    let report: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, report)
}

fn levels(v: &Value) -> Vec<(i64, i64)> {
    v.as_array().unwrap().iter().map(|l| (l["num"].as_i64().unwrap(), l["den"].as_i64().unwrap())).collect()
}

#[test]
fn build_companion_crystal() {
    let (code, r) = job("build --p 5 --d 3 --rep-builtin companion");
    assert_eq!(code, 0);
    let weights = r["output"]["object"]["crystal"]["weights"].as_array().unwrap();
    let dims: Vec<u64> = weights.iter().map(|w| w["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![0, 1, 1]);
    assert_eq!(r["output"]["field"]["m"], 2);
}

#[test]
fn build_extension_and_trivial() {
    let (code, r) = job("build --p 5 --c t^-2");
    assert_eq!(code, 0);
    assert_eq!(r["output"]["object"]["module"]["n"], 1);
    assert_eq!(r["output"]["object"]["module"]["N"], 64);

    let (code, r) = job("build --p 5 --d 1 --rep-builtin trivial");
    assert_eq!(code, 0);
    assert_eq!(r["output"]["object"]["crystal"]["rank"], 1);
}

#[test]
fn vfilt_reports() {
    let (code, r) = job("vfilt --p 5 --d 1 --rep-builtin trivial --window 6");
    assert_eq!(code, 0);
    assert!(r["output"]["axioms"]["results"].as_array().unwrap().iter().all(|a| a["status"] == "pass"));

    let (code, r) = job("vfilt --p 5 --d 3 --rep-builtin companion --window 2");
    assert_eq!(code, 0);
    let jumps = levels(&r["output"]["jumps"]);
    assert!(jumps.iter().all(|&(n, d)| d == 3 && n.rem_euclid(3) != 0));
    assert!(jumps.contains(&(1, 3)) && jumps.contains(&(2, 3)));

    let (code, r) = job("vfilt --p 5 --c t^-2 --window 6");
    assert_eq!(code, 0, "{}", r["output"]);
    let a4 = r["output"]["axioms"]["a4_levels"].as_array().unwrap();
    assert!(a4.iter().any(|s| s["status"] == "fail"));
    assert_eq!(r["output"]["shifted_exactness"]["sub_matches_delta"], true);
}

#[test]
fn sol_dimensions() {
    for (args, dim) in
        [("sol --p 5 --d 1 --rep-builtin trivial --rank 3", 3), ("sol --p 5 --c t^-2", 0), ("sol --p 5 --c 0", 1)]
    {
        let (code, r) = job(args);
        assert_eq!(code, 0);
        assert_eq!(r["output"]["dim"], dim, "{args}");
    }
}

#[test]
fn rep_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    std::fs::write(&path, r#"{"d": 3, "r": 3, "mat": [[0,0,1],[1,0,0],[0,1,0]]}"#).unwrap();
    let (code, r) = job(&format!("recover --p 7 --rep {}", path.display()));
    assert_eq!(code, 0);
    assert_eq!(r["output"]["isomorphic"], true);

    std::fs::write(&path, r#"{"d": 3, "r": 2, "mat": [[1,1],[0,1]]}"#).unwrap();
    let (code, r) = job(&format!("recover --p 7 --rep {}", path.display()));
    assert_eq!(code, 2);
    assert_eq!(r["status"], "invalid_input");
}

#[test]
fn exit_codes() {
    assert_eq!(job("vfilt --p 4 --c t").0, 2);
    assert_eq!(job("vfilt --p 5").0, 2);
    assert_eq!(job("vfilt --p 5 --c t^2").0, 2);
    assert_eq!(job("roundtrip --count 1").0, 2);
    assert_eq!(job("glue --p 5 --c t^-2").0, 2);
    assert_eq!(job("frobnicate --p 5").0, 2);
    // No extension degree is allowed, so saturation cannot finish.
    assert_eq!(job("recover --p 7 --d 3 --rep-builtin regular --cap 0").0, 3);
}

#[test]
fn roundtrip_counts() {
    let (code, r) = job("roundtrip --seed 3 --p 5 --d 4 --count 10 --morphisms 5");
    assert_eq!(code, 0);
    let pair = &r["output"]["pairs"][0];
    assert_eq!(pair["g_of_f_pass"], 10);
    assert_eq!(pair["f_of_g_pass"], 10);
    assert_eq!(pair["naturality_pass"], 5);
    assert_eq!(pair["corrupted_rejected"], 1);

    let (code, _) = job("roundtrip --seed 3 --p 5 --d 2 --rep-builtin trivial --rank 0");
    assert_eq!(code, 2);
    let (code, r) = job("roundtrip --seed 3 --p 5 --d 2 --rep-builtin trivial --morphisms 1");
    assert_eq!(code, 0);
    assert_eq!(r["output"]["total_cases"], 1);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["vfilt", "roundtrip", "--seed", "9", "--p", "7", "--count", "5", "--morphisms", "2"];
    let a = run(args);
    let b = run(args);
    assert_eq!(a, b);
    let r: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(r["digest"].as_str().unwrap().len(), 64);
}
