use std::process::Command;

use hopf_kh::cli::{
    cmd_action, cmd_alexander, cmd_detect, cmd_jones, cmd_kh, cmd_koszul_bound, ActionOutput, AlexanderOutput,
    CensusRow, JonesOutput, KhOutput, KoszulOutput,
};
use hopf_kh::detector::Certificate;
use hopf_kh::homalg::{BigradedGroup, Coeff};
use hopf_kh::library::DiagramLibrary;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn hopf_kh(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopf-kh")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let text = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, x);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn json_round_trips_for_every_command() {
    for d in DiagramLibrary::all() {
        for coeff in [Coeff::Z, Coeff::F2, Coeff::Q] {
            round_trip(&cmd_kh(&d, coeff, false, None).unwrap());
            round_trip(&cmd_kh(&d, coeff, true, None).unwrap());
        }
        round_trip(&cmd_jones(&d).unwrap());
        round_trip(&cmd_alexander(&d).unwrap());
        if d.crossing_count() <= 6 {
            round_trip(&cmd_detect(&d).unwrap());
        }
        if d.component_count() >= 2 {
            round_trip(&cmd_action(&d, None).unwrap());
            round_trip(&cmd_koszul_bound(&d).unwrap());
        }
    }
}

#[test]
fn kh_commands() {
    let (code, out, _) = hopf_kh(&["kh", "--coeff", "Z", "hopf-plus", "--format", "json"]);
    assert_eq!(code, 0);
    let o: KhOutput = serde_json::from_str(out.trim()).unwrap();
    let want = BigradedGroup::from_ranks(Coeff::Z, &[((0, 0), 1), ((0, 2), 1), ((2, 4), 1), ((2, 6), 1)]);
    assert_eq!(o.group(), want);

    let (_, out, _) = hopf_kh(&["kh", "--reduced", "--coeff", "Z", "hopf-minus", "--format", "json"]);
    let o: KhOutput = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(o.group(), BigradedGroup::from_ranks(Coeff::Z, &[((0, -1), 1), ((-2, -5), 1)]));

    let (_, a, _) = hopf_kh(&["khr", "hopf-minus", "--format", "json"]);
    assert_eq!(a.trim(), out.trim());

    let (code, _, err) = hopf_kh(&["kh", "unknown-name"]);
    assert_ne!(code, 0);
    assert!(err.contains("unknown-name"));
    let (code, _, _) = hopf_kh(&["kh", "PD[X[1,2,3]"]);
    assert_ne!(code, 0);
}

#[test]
fn small_commands() {
    let (_, out, _) = hopf_kh(&["alexander", "hopf-plus"]);
    assert_eq!(out.lines().next(), Some("t^(1/2) - t^(-1/2)"));
    let (_, out, _) = hopf_kh(&["alexander", "hopf-plus", "--format", "json"]);
    let o: AlexanderOutput = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(o.torres, Some(true));
    assert_eq!(hopf_kh(&["koszul-bound", "hopf-plus"]).1, "4\n");
    let (_, out, _) = hopf_kh(&["koszul-bound", "hopf-plus", "--format", "json"]);
    assert_eq!(serde_json::from_str::<KoszulOutput>(out.trim()).unwrap().bound.bound, 4);
    let (_, out, _) = hopf_kh(&["jones", "unknot", "--format", "json"]);
    let o: JonesOutput = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(o.display, "q + q^(-1)");
    let (_, out, _) = hopf_kh(&["action", "hopf-plus", "--format", "json"]);
    assert!(serde_json::from_str::<ActionOutput>(out.trim()).unwrap().action.is_trivial());
    let (code, out, _) = hopf_kh(&["list"]);
    assert_eq!(code, 0);
    assert!(out.contains("whitehead"));
}

#[test]
fn detect_exit_codes() {
    let (code, out, _) = hopf_kh(&["detect", "hopf-plus", "--format", "json"]);
    assert_eq!(code, 0);
    let c: Certificate = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(c.verdict.to_string(), "IsHopfPositive");
    // a negative verdict is not an error
    let (code, out, _) = hopf_kh(&["detect", "trefoil-right"]);
    assert_eq!(code, 0);
    assert!(out.contains("NotHopfLikeHomology"));
    let (code, _, _) = hopf_kh(&["koszul-bound", "unknot"]);
    assert_ne!(code, 0);
}

#[test]
fn jsonl_file_keeps_input_order() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("census.jsonl");
    let names = ["hopf-minus", "trefoil-left", "hopf-plus-r2", "unlink-2", "whitehead"];
    let lines: Vec<String> = names.iter().map(|n| DiagramLibrary::get(n).unwrap().to_json()).collect();
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let p = path.to_str().unwrap();

    let (code, out, _) = hopf_kh(&["detect", "--file", p, "--format", "json", "--jobs", "3"]);
    assert_eq!(code, 0);
    let verdicts: Vec<String> =
        out.lines().map(|l| serde_json::from_str::<Certificate>(l).unwrap().verdict.to_string()).collect();
    assert_eq!(
        verdicts,
        ["IsHopfNegative", "NotHopfLikeHomology", "IsHopfPositive", "NotHopfLikeHomology", "NotHopfLikeHomology"]
    );

    let (code, out, _) = hopf_kh(&["census", "--file", p, "--format", "json"]);
    assert_eq!(code, 0);
    let rows: Vec<CensusRow> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.iter().map(|r| r.diagram.as_str()).collect::<Vec<_>>(), names);

    std::fs::write(&path, format!("{}\nnot-a-diagram\n", lines[0])).unwrap();
    let (code, out, err) = hopf_kh(&["detect", "--file", p, "--format", "json"]);
    assert_ne!(code, 0);
    assert_eq!(out.lines().count(), 1);
    assert!(err.contains("line 2"));
}
