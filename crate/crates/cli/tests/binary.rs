use std::process::Command;

fn vqf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vqf"))
}

#[test]
fn exit_codes_and_streams() {
    let ok = vqf().args(["structural", "--alpha", "1,1,0"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), "{\"defect\":\"0/1\"}\n");

    let bad = vqf().arg("nonsense").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8(bad.stdout).unwrap().starts_with("{\"error\":"));
}

#[test]
fn fd_step_comes_from_the_environment() {
    let out = vqf()
        .args(["apply-vq", "--point", "0.5,1,1,1", "--alpha", "1,1,0"])
        .env("VQ_FD_STEP", "0.001")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["h"], 0.001);

    let rejected = vqf().args(["apply-vq", "--point", "0.5,1,1,1", "--alpha", "1,1,0"]).env("VQ_FD_STEP", "-1").output().unwrap();
    assert_eq!(rejected.status.code(), Some(2));
}
