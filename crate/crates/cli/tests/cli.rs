use std::path::Path;
use std::process::{Command, Output};

use halton_subseq::halton::{halton_points, radical_inverse, BaseTuple};
use halton_subseq_cli::config::RunConfig;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_halton-subseq"));
    c.env_remove("HALTON_SUBSEQ_MAX_DIGITS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn gen_first_halton_points() {
    let out = stdout(&[
        "gen", "--beta", "1", "--bases", "2,3", "--n", "3", "--exact",
    ]);
    assert_eq!(
        out,
        "n,index,x1,x2\n0,0,0/1,0/1\n1,1,1/2,1/3\n2,2,1/4,2/3\n"
    );
    let out = stdout(&["gen", "--beta", "sqrt(2)", "--bases", "2", "--n", "1"]);
    assert_eq!(out, "n,index,x1\n0,0,0\n");
}

#[test]
fn gen_floats_use_seventeen_digits() {
    let out = stdout(&["gen", "--beta", "1", "--bases", "3", "--n", "3"]);
    assert_eq!(
        out,
        "n,index,x1\n0,0,0\n1,1,0.33333333333333333\n2,2,0.66666666666666667\n"
    );
}

#[test]
fn gen_rows_follow_floor_indices() {
    let out = stdout(&[
        "gen", "--beta", "pi", "--bases", "2,3", "--n", "200", "--exact",
    ]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,index,x1,x2"));
    let pi = std::f64::consts::PI;
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        let i = (n as f64 * pi).floor() as u64;
        assert_eq!(f[1], i.to_string());
        let (a, b) = (radical_inverse(i, 2), radical_inverse(i, 3));
        assert_eq!(f[2], format!("{}/{}", a.numer(), a.denom()));
        assert_eq!(f[3], format!("{}/{}", b.numer(), b.denom()));
    }
}

#[test]
fn rejected_inputs_exit_two() {
    assert_eq!(code(&["gen", "--beta", "0", "--bases", "2", "--n", "3"]), 2);
    assert_eq!(
        code(&["gen", "--beta", "-1", "--bases", "2", "--n", "3"]),
        2
    );
    assert_eq!(
        code(&["gen", "--beta", "1", "--bases", "2,4", "--n", "3"]),
        2
    );
    assert_eq!(
        code(&["gen", "--beta", "nonsense", "--bases", "2", "--n", "3"]),
        2
    );
    assert_eq!(
        code(&["sweep", "--beta", "1", "--bases", "2", "--n-range", ""]),
        2
    );
    assert_eq!(
        code(&[
            "sweep",
            "--beta",
            "1",
            "--bases",
            "2",
            "--n-range",
            "2^6..2^4"
        ]),
        2
    );
    assert_eq!(
        code(&["bounds", "--mode", "prop1", "--beta", "3/2", "--bases", "2", "--n", "10"]),
        2
    );
    assert_eq!(code(&["verify-merge", "--beta", "3/2", "--n", "10"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn precision_exhaustion_exits_three() {
    let args = ["gen", "--beta", "0.5~digits=20", "--bases", "2", "--n", "3"];
    assert_eq!(code(&args), 3);
}

#[test]
fn work_budget_exits_four() {
    let args = [
        "discrepancy",
        "--beta",
        "1",
        "--bases",
        "2,3",
        "--n",
        "1000",
        "--work-budget",
        "10",
    ];
    assert_eq!(code(&args), 4);
    let args = [
        "bounds",
        "--mode",
        "prop1",
        "--beta",
        "1/2",
        "--bases",
        "2",
        "--n",
        "100",
        "--work-budget",
        "1e2",
    ];
    assert_eq!(code(&args), 4);
}

#[test]
fn bound_violation_exits_five() {
    let e = halton_subseq_cli::error::CliError::Failed("x".into());
    assert_eq!(e.exit_code(), 5);
}

#[test]
fn env_var_caps_precision_and_flag_wins() {
    let args = ["gen", "--beta", "pi", "--bases", "2", "--n", "5"];
    let out = bin()
        .args(args)
        .env("HALTON_SUBSEQ_MAX_DIGITS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(args)
        .args(["--max-digits", "100"])
        .env("HALTON_SUBSEQ_MAX_DIGITS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bounds_examples() {
    let out = stdout(&[
        "bounds",
        "--mode",
        "prop1",
        "--beta",
        "(0+1*sqrt(2))/2",
        "--bases",
        "2",
        "--n",
        "100",
    ]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("100,sqrt(2),2,<=(7),"), "{}", rows[1]);
    assert!(rows[1].ends_with(",true"));

    let out = stdout(&[
        "bounds", "--mode", "lemma1", "--beta", "1/2", "--bases", "2", "--n", "1",
    ]);
    assert_eq!(out.lines().nth(1), Some("1,2,2,(0),0,1,3,1,true"));

    let out = stdout(&[
        "bounds",
        "--mode",
        "lemma1",
        "--beta",
        "0.318309886183790671537767526745~digits=29",
        "--bases",
        "2,3",
        "--n",
        "50",
        "--j",
        "2,1",
    ]);
    assert_eq!(out.lines().count(), 2);
    assert!(out.contains("\"2,3\",\"(2,1)\","));
    assert!(out.trim_end().ends_with("true"));

    let out = stdout(&[
        "bounds", "--mode", "sl", "--beta", "sqrt(2)", "--bases", "2", "--l", "8",
    ]);
    let s: u64 = out
        .lines()
        .nth(1)
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(s > 0);
}

#[test]
fn sweep_reports_slope() {
    let out = stdout(&[
        "sweep",
        "--beta",
        "1",
        "--bases",
        "2",
        "--n-range",
        "2^4..2^12",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 1 + 9 + 1);
    // van der Corput at N = 2^k has N D* = 1
    assert!(lines[1..10]
        .iter()
        .all(|l| l.split(',').nth(1) == Some("1")));
    assert_eq!(lines[10], "fitted_slope=0");

    let out = stdout(&[
        "sweep",
        "--beta",
        "sqrt(2)",
        "--bases",
        "2,3",
        "--n-range",
        "2^8..2^11",
        "--exact",
    ]);
    let ns: Vec<u64> = out
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("fitted_slope="))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns, [256, 512, 1024, 2048]);
    assert!(out.lines().last().unwrap().starts_with("fitted_slope="));
}

#[test]
fn cf_and_ostrowski_tables() {
    let out = stdout(&["cf", "--beta", "10/7", "--k", "10"]);
    assert_eq!(out, "k,a_k,p_k,q_k\n0,1,1,1\n1,2,3,2\n2,3,10,7\n");
    let out = stdout(&["cf", "--beta", "sqrt(2)", "--k", "5"]);
    assert_eq!(out.lines().last(), Some("5,2,99,70"));
    let out = stdout(&["ostrowski", "--beta", "(1+sqrt(5))/2", "--n", "100"]);
    let total: u64 = out
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<u64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            f[1] * f[2]
        })
        .sum();
    assert_eq!(total, 100);
}

#[test]
fn verify_merge_passes() {
    let out = stdout(&["verify-merge", "--beta", "sqrt(2)", "--n", "5000"]);
    assert_eq!(
        out,
        "beta,N,checked,passed,mismatch\nsqrt(2),5000,5000,true,\n"
    );
}

#[test]
fn discrepancy_from_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.csv");
    std::fs::write(&path, "n,x1,x2\n0,0,0\n1,1/2,0.25\n2,0.75,1/2\n").unwrap();
    let out = stdout(&["discrepancy", "--input", path.to_str().unwrap()]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..2], ["3", "2"]);

    std::fs::write(&path, "n,x1\n0,1\n").unwrap();
    assert_eq!(code(&["discrepancy", "--input", path.to_str().unwrap()]), 2);
}

#[test]
fn discrepancy_of_prefixes() {
    let out = stdout(&[
        "discrepancy",
        "--beta",
        "1",
        "--bases",
        "2",
        "--n-range",
        "1,2,4,8",
    ]);
    let values: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    // van der Corput: D* = 1/N at powers of two
    assert_eq!(values, ["1", "0.5", "0.25", "0.125"]);
}

fn svg_circles(path: &Path) -> Vec<(f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed svg");
    doc.descendants()
        .filter(|n| n.has_tag_name("circle"))
        .map(|n| {
            (
                n.attribute("cx").unwrap().parse().unwrap(),
                n.attribute("cy").unwrap().parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn figure1_panels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&["figure1", "--out", out]), 0);
    let halton = halton_points(&BaseTuple::new(vec![2, 3]).unwrap(), 500, 0);
    for stem in ["1", "sqrt2", "pi", "e"] {
        let circles = svg_circles(&dir.path().join(format!("figure1_beta_{stem}.svg")));
        assert_eq!(circles.len(), 500, "{stem}");
        for (cx, cy) in &circles {
            assert!((50.0..470.0).contains(cx) && (50.0..=470.0).contains(cy));
            assert!(*cy > 50.0);
        }
        if stem == "1" {
            for ((cx, cy), p) in circles.iter().zip(halton.points()) {
                let x = *p.coords[0].numer() as f64 / *p.coords[0].denom() as f64;
                let y = *p.coords[1].numer() as f64 / *p.coords[1].denom() as f64;
                assert!((cx - (50.0 + 420.0 * x)).abs() < 1e-3);
                assert!((cy - (50.0 + 420.0 * (1.0 - y))).abs() < 1e-3);
            }
        }
    }
}

#[test]
fn gen_svg_has_one_circle_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.svg");
    let args = [
        "gen", "--beta", "e", "--bases", "2,5", "--n", "123", "--format", "svg",
    ];
    assert_eq!(
        code(&[&args[..], &["--out", path.to_str().unwrap()]].concat()),
        0
    );
    assert_eq!(svg_circles(&path).len(), 123);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases: [&[&str]; 4] = [
        &[
            "sweep",
            "--beta",
            "sqrt(2)",
            "--bases",
            "2,3",
            "--n-range",
            "2^6..2^10",
        ],
        &[
            "bounds",
            "--mode",
            "prop1",
            "--beta",
            "0.318309886183790671537767526745~digits=29",
            "--bases",
            "2,3",
            "--n",
            "300",
        ],
        &[
            "bounds", "--mode", "lemma1", "--beta", "7/10", "--bases", "2,3", "--n", "500",
        ],
        &[
            "discrepancy",
            "--beta",
            "e",
            "--bases",
            "2,3",
            "--n-range",
            "10,50,200",
        ],
    ];
    for args in cases {
        let one = stdout(&[args, &["--threads", "1"]].concat());
        let four = stdout(&[args, &["--threads", "4"]].concat());
        let default = stdout(args);
        assert_eq!(one, four, "{args:?}");
        assert_eq!(one, default, "{args:?}");
    }
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(
        code(&[
            "figure1",
            "--threads",
            "1",
            "--out",
            a.path().to_str().unwrap()
        ]),
        0
    );
    assert_eq!(
        code(&[
            "figure1",
            "--threads",
            "3",
            "--out",
            b.path().to_str().unwrap()
        ]),
        0
    );
    for stem in ["1", "sqrt2", "pi", "e"] {
        let f = format!("figure1_beta_{stem}.svg");
        assert_eq!(
            std::fs::read(a.path().join(&f)).unwrap(),
            std::fs::read(b.path().join(&f)).unwrap()
        );
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# first points\nbeta = 1\nbases = 2,3\nn = 10\nexact = true\n",
    )
    .unwrap();
    let out = stdout(&["gen", "--config", path.to_str().unwrap(), "--n", "2"]);
    assert_eq!(out, "n,index,x1,x2\n0,0,0/1,0/1\n1,1,1/2,1/3\n");

    std::fs::write(&path, "beta = 1\ncolour = red\n").unwrap();
    assert_eq!(code(&["gen", "--config", path.to_str().unwrap()]), 2);
}

#[test]
fn canonical_config_round_trips() {
    let text = "command = sweep\nbeta = sqrt(2)\nbases = 2,3\nn-range = 2^8..2^10\nthreads = 2\n";
    let cfg = RunConfig::from_text(text).unwrap();
    assert_eq!(RunConfig::from_text(&cfg.to_text()).unwrap(), cfg);
}
