use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_skewcodes"));
    cmd.args(args).env_remove("SKEWCODES_ENUM_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn skewcodes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn tlrs_build_lcd_example() {
    let o = run(&[
        "tlrs-build",
        "--p",
        "5",
        "--m",
        "1",
        "--r",
        "2",
        "--ell",
        "2",
        "--k",
        "1",
        "--h",
        "0",
        "--eta",
        "2+1u",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Gram: [[4,1],[1,3]]"), "{s}");
    assert!(s.contains("det: 1 "));
    assert!(s.contains("LCD: true (criterion true, Gram true, oracle true)"));
    assert!(s.contains("hull dim: 0"));
}

#[test]
fn tlrs_build_self_orthogonal_example() {
    let o = run(&[
        "tlrs-build",
        "--p",
        "5",
        "--ell",
        "2",
        "--k",
        "1",
        "--h",
        "0",
        "--eta",
        "2+0u",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["gram"], serde_json::json!([["0", "0"], ["0", "0"]]));
    assert_eq!(v["lcd_by_criterion"], false);
    assert_eq!(v["lcd_by_oracle"], false);
    assert_eq!(v["hull_dim"], 2);
}

#[test]
fn explicit_lambda_matches_subgroup() {
    let a = run(&[
        "tlrs-build",
        "--p",
        "5",
        "--ell",
        "2",
        "--k",
        "1",
        "--eta",
        "u",
        "--format",
        "json",
    ]);
    let b = run(&[
        "tlrs-build",
        "--p",
        "5",
        "--lambda",
        "{1, 4}",
        "--k",
        "1",
        "--eta",
        "u",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "tlrs-build",
        "--p",
        "5",
        "--ell",
        "3",
        "--lambda",
        "1,4",
        "--k",
        "1",
        "--eta",
        "u",
    ]);
    assert_eq!(c.status.code(), Some(2));
}

#[test]
fn acd_search_certificate() {
    let o = run(&[
        "acd-search",
        "--p",
        "5",
        "--m",
        "1",
        "--k",
        "1",
        "--ell",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["lambda"].as_array().unwrap().len(), 3);
    assert_eq!(v["acd_by_matrix"], true);
    assert_eq!(v["acd_by_oracle"], true);
    assert_eq!(v["mds_by_criterion"], true);
    assert_eq!(v["min_distance"], 3);
    assert_eq!(v["singleton_bound"], 3);

    let o = run(&[
        "acd-search",
        "--p",
        "5",
        "--k",
        "1",
        "--ell",
        "3",
        "--strategy",
        "exhaustive",
        "--format",
        "json",
    ]);
    assert_eq!(json(&o)["lambda"], serde_json::json!(["1", "2", "3"]));
}

#[test]
fn geometric_failure_and_fallback() {
    let o = run(&[
        "acd-search",
        "--p",
        "5",
        "--k",
        "1",
        "--ell",
        "2",
        "--strategy",
        "geometric",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("det G0 = 0"));
    let o = run(&[
        "acd-search",
        "--p",
        "5",
        "--k",
        "1",
        "--ell",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["search"]["strategy"], "exhaustive");
}

#[test]
fn verify_paper_examples_passes() {
    let o = run(&["verify-paper-examples"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().count() >= 15);
    assert!(s.lines().all(|l| l.starts_with("PASS ")), "{s}");
}

#[test]
fn exit_codes() {
    // q = 7 is not ≡ 1 mod 4
    assert_eq!(
        run(&["acd-build", "--p", "7", "--k", "1", "--lambda", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "tlrs-build",
            "--p",
            "6",
            "--ell",
            "1",
            "--k",
            "1",
            "--eta",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "tlrs-build",
            "--p",
            "5",
            "--ell",
            "3",
            "--k",
            "1",
            "--eta",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "tlrs-build",
            "--p",
            "5",
            "--ell",
            "2",
            "--k",
            "1",
            "--eta",
            "0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["acd-build", "--p", "5", "--k", "1", "--lambda", "1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let guard = [("SKEWCODES_ENUM_LIMIT", "10")];
    let args = [
        "acd-build",
        "--p",
        "5",
        "--k",
        "1",
        "--lambda",
        "1,2,3",
        "--distance",
        "always",
    ];
    assert_eq!(run_env(&args, &guard).status.code(), Some(3));
    let o = run_env(
        &[
            "acd-build",
            "--p",
            "5",
            "--k",
            "1",
            "--lambda",
            "1,2,3",
            "--format",
            "json",
        ],
        &guard,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["min_distance"].is_null());
    let bad = [("SKEWCODES_ENUM_LIMIT", "lots")];
    assert_eq!(
        run_env(&["verify-paper-examples"], &bad).status.code(),
        Some(2)
    );
}

#[test]
fn sweeps_are_deterministic_and_ordered() {
    let args = [
        "acd-sweep",
        "--p",
        "13",
        "--samples",
        "40",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = run(&[&args[..], &["--jobs", "1"]].concat());
    let b = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 40);
    let c = run(&[
        "acd-sweep",
        "--p",
        "13",
        "--samples",
        "40",
        "--seed",
        "8",
        "--format",
        "json",
    ]);
    assert_ne!(a.stdout, c.stdout);

    let t1 = run(&[
        "tlrs-sweep",
        "--p",
        "5",
        "--ell",
        "2",
        "--format",
        "csv",
        "--jobs",
        "1",
    ]);
    let t2 = run(&[
        "tlrs-sweep",
        "--p",
        "5",
        "--ell",
        "2",
        "--format",
        "csv",
        "--jobs",
        "3",
    ]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn tlrs_sweep_csv_columns() {
    let o = run(&[
        "tlrs-sweep",
        "--p",
        "5",
        "--ell",
        "2",
        "--k",
        "1",
        "--h",
        "0",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q,r,ell,lambda,k,h,eta,one_plus_eta_squared,alpha,gram_det,det_by_blocks,lcd_by_criterion,\
         lcd_by_gram,lcd_by_oracle,hull_dim,dim_code,dim_dual,dim_ambient,min_sum_rank_distance,\
         singleton_bound,consistent"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 24);
    // η² = −1 exactly for η = ±2
    let non_lcd = rows
        .iter()
        .filter(|r| r.split(',').nth(11) == Some("false"))
        .count();
    assert_eq!(non_lcd, 2);
}

#[test]
fn acd_sweep_csv_columns() {
    let o = run(&["acd-sweep", "--p", "5", "--samples", "4", "--format", "csv"]);
    let s = stdout(&o);
    assert_eq!(
        s.lines().next().unwrap(),
        "q,k,ell,lambda,gamma,trace_gamma,det_t,delta,structured_note,acd_by_matrix,acd_by_structure,\
         acd_by_oracle,hull_dim,table_matches,mds_by_criterion,min_distance,singleton_bound,strategy,\
         generator,scanned,consistent"
    );
    assert_eq!(s.lines().count(), 5);
}
