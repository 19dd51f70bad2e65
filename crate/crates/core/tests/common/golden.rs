//! CLI cases pinned by files under `tests/golden`.

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdout: Option<&'static str>,
    pub stderr: Option<&'static str>,
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case {
        name: "encode fixed",
        args: &["encode", "--model", "fixed", "--in", "record_fixed.json"],
        stdout: Some("encode_fixed.out"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "encode hybrid",
        args: &["encode", "--model", "hybrid", "--in", "record_hybrid.json"],
        stdout: Some("encode_hybrid.out"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "decode fixed",
        args: &["decode", "--model", "fixed", "--in", "encode_fixed.out"],
        stdout: Some("record_fixed.json"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "decode hybrid",
        args: &["decode", "--model", "hybrid", "--in", "encode_hybrid.out"],
        stdout: Some("record_hybrid.json"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "convert hybrid to fixed",
        args: &[
            "convert",
            "--from",
            "hybrid",
            "--to",
            "fixed",
            "--in",
            "encode_hybrid.out",
        ],
        stdout: Some("convert_to_fixed.out"),
        stderr: Some("convert_to_fixed.err"),
        exit: 0,
    },
    Case {
        name: "convert fixed to hybrid",
        args: &[
            "convert",
            "--from",
            "fixed",
            "--to",
            "hybrid",
            "--in",
            "encode_fixed.out",
            "--context",
            "context_raw.json",
        ],
        stdout: Some("convert_to_hybrid.out"),
        stderr: Some("convert_to_hybrid.err"),
        exit: 0,
    },
    Case {
        name: "inspect fixed",
        args: &["inspect", "--in", "encode_fixed.out"],
        stdout: Some("inspect_fixed.out"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "inspect hybrid",
        args: &["inspect", "--in", "encode_hybrid.out"],
        stdout: Some("inspect_hybrid.out"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "inspect publisher",
        args: &["inspect", "--in", "publisher.dump"],
        stdout: Some("inspect_publisher.out"),
        stderr: None,
        exit: 0,
    },
    Case {
        name: "lifecycle accession",
        args: &[
            "lifecycle",
            "--in",
            "publisher.dump",
            "--to",
            "LIBRARY_ACCESSIONED",
            "--params",
            "accession_params.json",
        ],
        stdout: Some("lifecycle_accession.out"),
        stderr: Some("lifecycle_accession.err"),
        exit: 0,
    },
    Case {
        name: "lifecycle transit",
        args: &[
            "lifecycle",
            "--in",
            "lifecycle_accession.out",
            "--to",
            "EXTERNAL_TRANSIT",
            "--params",
            "transit_params.json",
        ],
        stdout: Some("lifecycle_transit.out"),
        stderr: Some("lifecycle_transit.err"),
        exit: 0,
    },
    Case {
        name: "lifecycle illegal edge",
        args: &[
            "lifecycle",
            "--in",
            "lifecycle_accession.out",
            "--to",
            "PUBLISHER_TAGGED",
        ],
        stdout: Some("empty.txt"),
        stderr: Some("lifecycle_illegal.err"),
        exit: 4,
    },
    Case {
        name: "decode corrupt block",
        args: &["decode", "--model", "fixed", "--in", "corrupt_block.hex"],
        stdout: Some("empty.txt"),
        stderr: Some("decode_corrupt.err"),
        exit: 3,
    },
    Case {
        name: "encode invalid record",
        args: &["encode", "--model", "fixed", "--in", "record_invalid.json"],
        stdout: Some("empty.txt"),
        stderr: Some("encode_invalid.err"),
        exit: 2,
    },
    Case {
        name: "inspect empty file",
        args: &["inspect", "--in", "empty.txt"],
        stdout: Some("empty.txt"),
        stderr: Some("inspect_empty.err"),
        exit: 3,
    },
    Case {
        name: "missing input",
        args: &["decode", "--model", "fixed", "--in", "missing.hex"],
        stdout: Some("empty.txt"),
        stderr: Some("decode_missing.err"),
        exit: 5,
    },
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs one case, returning a description of every mismatch.
pub fn run(case: &Case) -> Vec<String> {
    let dir = golden_dir();
    let out = Command::new(env!("CARGO_BIN_EXE_rfid28560"))
        .args(case.args)
        .current_dir(&dir)
        .env_remove("RFID28560_REGISTRY_DIR")
        .output()
        .expect("binary runs");
    let mut problems = Vec::new();
    if out.status.code() != Some(case.exit) {
        problems.push(format!(
            "{}: exit {:?}, expected {}",
            case.name,
            out.status.code(),
            case.exit
        ));
    }
    for (file, got, stream) in [
        (case.stdout, &out.stdout, "stdout"),
        (case.stderr, &out.stderr, "stderr"),
    ] {
        if let Some(file) = file {
            let want = std::fs::read(dir.join(file)).expect("golden file");
            if &want != got {
                problems.push(format!(
                    "{}: {stream} differs from {file}:\n{}",
                    case.name,
                    String::from_utf8_lossy(got)
                ));
            }
        }
    }
    problems
}
