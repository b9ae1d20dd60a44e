use std::path::Path;
use std::process::Command;

use conigen::io::manifest::{self, Payload};
use conigen::io::mps;
use conigen::sdo::SdoStructure;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = conigen_cli::run_with(std::iter::once("conigen").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn gen_then_verify_lo() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(&tmp.path().join("d"));
    let (code, out, err) = run(&["gen", "lo", "--mode", "both", "--m", "3", "--n", "6", "--seed", "7", "--out", &d, "--format", "mps"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("passed"));
    let dir = Path::new(&d);
    assert!(dir.join("instance.mps").is_file());
    assert!(dir.join("manifest.json").is_file());

    let m = path(&dir.join("manifest.json"));
    let (code, out, err) = run(&["verify", &m]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("1 files"));
}

#[test]
fn tampered_file_fails_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    assert_eq!(run(&["gen", "soco", "--m", "2", "--cone-dims", "3,2", "--partition", "B,N", "--out", &d]).0, 0);
    let cbf = tmp.path().join("instance.cbf");
    let text = std::fs::read_to_string(&cbf).unwrap().replacen("OBJSENSE\nMIN", "OBJSENSE\nMIN ", 1);
    std::fs::write(&cbf, text).unwrap();
    let (code, _, err) = run(&["verify", &path(&tmp.path().join("manifest.json"))]);
    assert_eq!(code, 1);
    assert!(err.contains("integrity"), "{err}");
}

#[test]
fn edited_payload_fails_verify_with_named_check() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    assert_eq!(run(&["gen", "lo", "--mode", "optimal", "--m", "2", "--n", "4", "--out", &d, "--format", "manifest"]).0, 0);
    let mpath = tmp.path().join("manifest.json");
    let mut man = manifest::read(&mpath).unwrap();
    if let Payload::Lo { instance, .. } = &mut man.payload {
        instance.b[0] += 1e-3;
    }
    man.files.clear();
    manifest::write(&man, &mpath).unwrap();
    let (code, _, err) = run(&["verify", &path(&mpath)]);
    assert_eq!(code, 1);
    assert!(err.contains("optimal.primal-residual"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["gen", "lo", "--m", "2", "--n", "4", "--bogus"]).0, 2);
    assert_eq!(run(&["gen", "lo", "--mode", "maxcomp", "--m", "2", "--n", "4"]).0, 2);
    assert_eq!(run(&["gen", "sdo", "--mode", "optimal", "--m", "2", "--n", "3"]).0, 2);
    assert_eq!(run(&["gen", "sdo", "--m", "2", "--n", "3", "--nB", "1", "--nN", "1", "--format", "mps"]).0, 2);
    assert_eq!(run(&["gen", "lo", "--m", "2", "--n", "4", "--batch", "0"]).0, 2);
    assert_eq!(run(&["verify"]).0, 2);
}

#[test]
fn invalid_arguments_write_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().join("never");
    // m >= n
    let (code, _, err) = run(&["gen", "lo", "--m", "5", "--n", "4", "--out", &path(&d)]);
    assert_eq!(code, 2, "{err}");
    assert!(!d.exists());
}

#[test]
fn sdo_maxcomp_with_empty_b() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    let (code, _, err) = run(&["gen", "sdo", "--mode", "maxcomp", "--m", "2", "--n", "4", "--nB", "0", "--nN", "3", "--out", &d]);
    assert_eq!(code, 0, "{err}");
    let man = manifest::read(&tmp.path().join("manifest.json")).unwrap();
    match man.payload {
        Payload::Sdo { certificate, .. } => assert_eq!(certificate.structure, SdoStructure::EmptyB),
        other => panic!("{:?}", other.family()),
    }
}

#[test]
fn batch_uses_index_as_stream() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    let (code, _, err) = run(&["gen", "lo", "--mode", "interior", "--m", "2", "--n", "5", "--seed", "11", "--batch", "3", "--out", &d]);
    assert_eq!(code, 0, "{err}");
    let mut seen = Vec::new();
    for i in 0..3u32 {
        let man = manifest::read(&tmp.path().join(format!("{i:04}")).join("manifest.json")).unwrap();
        assert_eq!((man.controls.seed, man.controls.stream), (11, i));
        seen.push(std::fs::read(tmp.path().join(format!("{i:04}")).join("instance.mps")).unwrap());
    }
    assert_ne!(seen[0], seen[1]);
}

#[test]
fn same_argv_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for rep in ["a", "b"] {
        let d = path(&tmp.path().join(rep));
        let args = ["gen", "sdo", "--mode", "both", "--structure", "block", "--m", "3", "--n", "4", "--nB", "1", "--nN", "2", "--seed", "2", "--out", &d];
        assert_eq!(run(&args).0, 0);
        let dir = Path::new(&d);
        outputs.push((
            std::fs::read(dir.join("instance.sdpa")).unwrap(),
            std::fs::read(dir.join("manifest.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("controls.toml");
    std::fs::write(&cfg, "seed = 5\ndensity = 0.6\nmargin = 0.2\n").unwrap();
    let d = path(&tmp.path().join("out"));
    let (code, _, err) = run(&["gen", "lo", "--mode", "interior", "--m", "3", "--n", "6", "--config", &path(&cfg), "--seed", "9", "--out", &d]);
    assert_eq!(code, 0, "{err}");
    let man = manifest::read(&Path::new(&d).join("manifest.json")).unwrap();
    assert_eq!(man.controls.seed, 9);
    assert_eq!(man.controls.density, Some(0.6));
    assert_eq!(man.controls.margin, 0.2);

    std::fs::write(&cfg, "sede = 5\n").unwrap();
    assert_eq!(run(&["gen", "lo", "--m", "3", "--n", "6", "--config", &path(&cfg), "--out", &d]).0, 2);
}

#[test]
fn lo_can_be_exported_as_cbf() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    assert_eq!(run(&["gen", "lo", "--m", "2", "--n", "5", "--nB", "2", "--format", "mps,cbf,manifest", "--out", &d]).0, 0);
    let man = manifest::read(&tmp.path().join("manifest.json")).unwrap();
    let formats: Vec<&str> = man.files.iter().map(|f| f.format.as_str()).collect();
    assert_eq!(formats, ["mps", "cbf"]);
    assert_eq!(run(&["verify", &path(&tmp.path().join("manifest.json"))]).0, 0);
}

#[test]
fn binary_honours_out_dir_env() {
    let tmp = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_conigen"))
        .args(["gen", "soco", "--mode", "maxcomp", "--m", "3", "--cone-dims", "3,3,2,1", "--partition", "T2,B,R,N"])
        .env(conigen_cli::OUT_DIR_ENV, tmp.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(tmp.path().join("instance.cbf").is_file());

    let bad = Command::new(env!("CARGO_BIN_EXE_conigen")).args(["gen", "lo", "--nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn rehashed_but_different_file_is_caught() {
    let tmp = tempfile::tempdir().unwrap();
    let d = path(tmp.path());
    assert_eq!(run(&["gen", "lo", "--mode", "interior", "--m", "2", "--n", "4", "--out", &d]).0, 0);
    let mpath = tmp.path().join("manifest.json");
    let file = tmp.path().join("instance.mps");
    let mut inst = mps::read(&file).unwrap();
    inst.c[0] += 1.0;
    mps::write(&inst, &file).unwrap();
    assert!(manifest::read(&mpath).unwrap_err().to_string().contains("integrity"));
    let mut m = manifest::parse(&std::fs::read_to_string(&mpath).unwrap()).unwrap();
    m.files[0] = manifest::file_ref(tmp.path(), &file, "mps").unwrap();
    manifest::write(&m, &mpath).unwrap();
    let (code, _, err) = run(&["verify", &path(&mpath)]);
    assert_eq!(code, 1);
    assert!(err.contains("differs from the manifest instance"), "{err}");
}
