use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bb84-keyrate"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn bb84-keyrate")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn invalid_input_exits_two() {
    let o = run(&["rate", "--m", "1", "--p", "0.6", "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(
        run(&["rate", "--m", "0", "--p", "0.1", "--q", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sweep", "--m", "1.5", "--q", "0.2"]).status.code(),
        Some(2)
    );
}

#[test]
fn bracket_failure_exits_four() {
    let o = run(&[
        "threshold",
        "--m",
        "1",
        "--q",
        "0",
        "--p-lo",
        "0.12",
        "--p-hi",
        "0.16",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn rate_row() {
    let o = run(&["rate", "--m", "1", "--p", "0.05", "--q", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,p,q,p_tilde,reconciliation,single_copy_entropy,mixture_entropy,eve_information,rate"
    );
    let rate: f64 = lines
        .next()
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((rate - 0.42721).abs() < 1e-5);
}

#[test]
fn csv_and_json_carry_same_numbers() {
    let args = ["sweep", "--m", "1,3", "--q", "0,0.25,0.5"];
    let csv = run(&args);
    let json = run(&[&args[..], &["--format", "json"]].concat());
    assert!(csv.status.success() && json.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&json)).unwrap();
    let csv_text = stdout(&csv);
    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), rows.len());
    assert_eq!(rows.len(), 6);
    for (line, row) in body.iter().zip(&rows) {
        for (name, field) in header.iter().zip(line.split(',')) {
            let v = &row[*name];
            if field.is_empty() {
                assert!(v.is_null(), "{name}");
            } else {
                assert_eq!(v.as_f64().unwrap(), field.parse::<f64>().unwrap(), "{name}");
            }
        }
    }
    // q = 1/2 has no sign change; those rows are kept with empty cells.
    assert!(body[2].ends_with(",,,"));
    assert!(String::from_utf8_lossy(&csv.stderr).contains("warning"));
}

#[test]
fn upper_bound_crossing() {
    let o = run(&["upperbound", "--p", "0.14:0.15:0.0005"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let values: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (p, u) = l.split_once(',').unwrap();
            (p.parse().unwrap(), u.parse().unwrap())
        })
        .collect();
    let crossing = values
        .windows(2)
        .find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)
        .unwrap();
    assert!(
        crossing[0].0 >= 0.146 && crossing[1].0 <= 0.147,
        "{crossing:?}"
    );
}

#[test]
fn verify_small_blocks() {
    let o = run(&["verify", "--m-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 6 * 12);
    assert_eq!(run(&["verify", "--m-max", "13"]).status.code(), Some(2));
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["sweep", "--m", "1,10,20,...,40", "--q", "0.1,0.3"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let via_env = bin()
        .args(args)
        .env("BB84_KEYRATE_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, one.stdout);
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("bb84-keyrate-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("opt.json");
    let o = run(&[
        "optimize",
        "--m",
        "1",
        "--q",
        "0,0.1,0.2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows[0]["q"].as_f64().unwrap(), 0.2);
    std::fs::remove_dir_all(&dir).unwrap();
}
