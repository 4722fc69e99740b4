use std::path::Path;
use std::process::{Command, Output};

use optomech::cli::{parse_config, run, Mode};

fn optomech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optomech")).args(args).output().unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
    comments: Vec<String>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines();
        let header = lines.next().unwrap().split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut comments = Vec::new();
        for line in lines {
            if let Some(c) = line.strip_prefix("# ") {
                comments.push(c.to_string());
            } else {
                rows.push(line.split(',').map(|v| v.parse().unwrap()).collect());
            }
        }
        Csv { header, rows, comments }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.header.iter().position(|h| h == name).unwrap();
        self.rows.iter().map(|r| r[i]).collect()
    }
}

fn stdout_csv(args: &[&str]) -> Csv {
    let out = optomech(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Csv::parse(&String::from_utf8(out.stdout).unwrap())
}

#[test]
fn spectrum_rows_are_unitary() {
    let csv = stdout_csv(&["spectrum"]);
    assert_eq!(
        csv.header,
        ["omega_L", "delta_c", "x_ss", "re_r", "im_r", "re_t", "im_t", "R", "T", "bistable"]
    );
    assert_eq!(csv.rows.len(), 1001);
    for (r, t) in csv.col("R").iter().zip(csv.col("T")) {
        assert!((r + t - 1.0).abs() < 1e-12);
        assert!((0.0..=1.0 + 1e-9).contains(&t) && (-1e-12..=1.0 + 1e-9).contains(r));
    }
    let w = csv.col("omega_L");
    assert!(w.windows(2).all(|p| p[1] > p[0]));
}

#[test]
fn ratio_exceeds_one_below_cavity_resonance() {
    let csv = stdout_csv(&["ratio", "--grid_min", "-1.5", "--grid_max", "1.5", "--grid_step", "0.1"]);
    for (w, r) in csv.col("omega_L").iter().zip(csv.col("ratio")) {
        // delta_c = -omega_L
        if *w < -0.05 {
            assert!(r > 1.0, "omega_L = {w}, ratio = {r}");
        } else if *w > 0.05 {
            assert!(r < 1.0, "omega_L = {w}, ratio = {r}");
        }
    }
}

#[test]
fn weak_coupling_dynamics_settle_near_steady_transmission() {
    let csv = stdout_csv(&["dynamics"]);
    let band = csv
        .comments
        .iter()
        .find_map(|c| c.strip_prefix("final window T band = ["))
        .unwrap()
        .trim_end_matches(']')
        .split(", ")
        .map(|v| v.parse::<f64>().unwrap())
        .collect::<Vec<_>>();
    let cfg = parse_config(Mode::Dynamics, "", &[]).unwrap();
    let ss = optomech::steady::solve_steady(&cfg.params).unwrap();
    let t_ss = optomech::steady::intensity_coefficients(&cfg.params, ss.x_selected).transmission;
    for b in band {
        assert!((b - t_ss).abs() <= 0.1 * t_ss, "band {b} vs steady {t_ss}");
    }
    let t = csv.col("t");
    assert!(t.windows(2).all(|p| p[1] > p[0]));
    assert!(csv.col("T_inst").iter().all(|&v| v >= 0.0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# damped mirror\ngamma = 0.2\ng = 0.5\nt_final = 10\n").unwrap();
    let conf = conf.to_str().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let status = |args: &[&str]| optomech(args).status.code();
    assert_eq!(status(&["dynamics", "--config", conf, "--out", out_a.to_str().unwrap()]), Some(0));
    assert_eq!(
        status(&["dynamics", "--config", conf, "--gamma", "0.3", "--out", out_b.to_str().unwrap()]),
        Some(0)
    );
    assert_ne!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());

    let expected = run(&parse_config(Mode::Dynamics, "gamma = 0.3\ng = 0.5\nt_final = 10\n", &[]).unwrap())
        .unwrap()
        .render();
    assert_eq!(std::fs::read_to_string(&out_b).unwrap(), expected);
}

#[test]
fn errors_map_to_exit_codes() {
    let out = optomech(&["spectrum", "--kappa1", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kappa1"));

    assert_eq!(optomech(&["spectrum", "--nonsense", "1"]).status.code(), Some(1));
    assert_eq!(optomech(&["fig"]).status.code(), Some(1));
    assert_eq!(optomech(&[]).status.code(), Some(1));
    assert_eq!(
        optomech(&["steady", "--config", "/nonexistent/optomech.conf"]).status.code(),
        Some(1)
    );

    let out = optomech(&["perturb", "--g_list", "0,0,0", "--t_final", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perturb_reports_slope_and_closed_form_deviation() {
    let csv = stdout_csv(&["perturb", "--t_final", "30"]);
    assert_eq!(csv.header, ["g", "residual_norm"]);
    assert_eq!(csv.col("g"), vec![0.01, 0.02, 0.04]);
    let slope: f64 = csv
        .comments
        .iter()
        .find_map(|c| c.strip_prefix("slope = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 2.0).abs() < 0.2);
    assert_eq!(csv.comments.iter().filter(|c| c.contains("eta =")).count(), 3);
}

#[test]
fn steady_lists_every_root() {
    let csv = stdout_csv(&["steady", "--delta_c", "3", "--alpha_re", "20"]);
    assert_eq!(csv.rows.len(), 3);
    assert_eq!(csv.col("selected"), vec![1.0, 0.0, 0.0]);
    let single = stdout_csv(&["steady"]);
    assert_eq!(single.rows.len(), 1);
    assert_eq!(single.col("bistable"), vec![0.0]);
}

#[test]
fn shipped_recipes_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("recipes");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        let mode: Mode = name.split('-').next().unwrap().parse().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        parse_config(mode, &text, &[]).unwrap_or_else(|e| panic!("{name}: {e}"));
        seen += 1;
    }
    assert!(seen >= 4);
}
