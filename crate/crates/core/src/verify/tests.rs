use super::*;
use crate::ring::{F2, Z};

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("khmod-verify-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    d
}

#[test]
fn manifest_hash_is_stable_and_sensitive() {
    let m = Manifest::new("verify-reidemeister", RingKind::Z);
    assert_eq!(m.hash(), m.clone().hash());
    assert_eq!(m.hash().len(), 64);
    let mut other = m.clone();
    other.seed += 1;
    assert_ne!(other.hash(), m.hash());
    let mut bad = m.clone();
    bad.conventions.corrupted = true;
    assert_ne!(conventions_hash(&bad.conventions), conventions_hash(&m.conventions));
    let back: Manifest = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back.hash(), m.hash());
}

#[test]
fn exit_codes() {
    let m = Manifest::new("x", RingKind::Z);
    let mk = |os: &[Outcome]| VerificationReport::new(&m, os.iter().map(|o| Check::new("c", *o)).collect(), Instant::now());
    assert_eq!(mk(&[Outcome::Pass, Outcome::Vacuous]).exit_code(), 0);
    assert_eq!(mk(&[Outcome::Pass, Outcome::Inconclusive]).exit_code(), 3);
    assert_eq!(mk(&[Outcome::Inconclusive, Outcome::Fail]).exit_code(), 2);
    assert_eq!(mk(&[]).exit_code(), 0);
    assert_eq!(Check::from_error("w", &Error::Window("x".into())).outcome, Outcome::Inconclusive);
    assert_eq!(Check::from_error("w", &Error::Inconsistent("x".into())).outcome, Outcome::Fail);
}

#[test]
fn reidemeister_and_negative_control() {
    let mut m = Manifest::new("verify-reidemeister", RingKind::F2);
    m.n = Some(3);
    let store = ProjectorStore::default();
    let r = run(&m, &store).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.summary());
    assert_eq!(r.stable_json().unwrap(), run(&m, &store).unwrap().stable_json().unwrap());
    m.conventions.corrupted = true;
    let bad = run(&m, &store).unwrap();
    assert_eq!(bad.exit_code(), 2);
    assert!(bad.checks.iter().filter(|c| c.name.starts_with("R2")).all(|c| c.outcome == Outcome::Fail));
}

#[test]
fn projector_cache_round_trip() {
    let dir = temp_dir("cache");
    let store = ProjectorStore::new(Some(dir.clone()));
    let conv = Conventions::default();
    let p = store.get::<Z>(2, 2, 6, &conv).unwrap();
    let path = store.path(2, 2, 6, RingKind::Z).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let (h, q) = projector_from_json::<Z>(&text).unwrap();
    assert_eq!(q, p);
    assert_eq!(h.t_hi, Some(6));
    assert_eq!(projector_to_json(&q, &conv).unwrap(), text);
    assert!(projector_from_json::<F2>(&text).is_err());
    assert_eq!(store.load::<Z>(2, 2, 6, &conv), Some(p));
    let mut other = conv.clone();
    other.corrupted = true;
    assert_eq!(store.load::<Z>(2, 2, 6, &other), None);
    let _ = fs::remove_dir_all(dir);
}

#[test]
fn build_projector_report() {
    let dir = temp_dir("build");
    let store = ProjectorStore::new(Some(dir.clone()));
    let mut m = Manifest::new("build-projector", RingKind::Z);
    (m.n, m.k, m.trunc) = (Some(2), Some(2), Some(8));
    let r = run(&m, &store).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.summary());
    let again = run(&m, &store).unwrap();
    let cached = again.checks.iter().find(|c| c.name == "agrees with the cached file").unwrap();
    assert_eq!(cached.outcome, Outcome::Pass);
    let text = r.to_json().unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    let _ = fs::remove_dir_all(dir);
}

#[test]
fn modular_pipeline() {
    let store = ProjectorStore::default();
    for k in [1, 3] {
        let mut m = Manifest::new("verify-modular", RingKind::F2);
        (m.n, m.k, m.trunc) = (Some(1), Some(k), Some(6));
        let r = run(&m, &store).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.summary());
        let main = r.checks.last().unwrap();
        assert_eq!(main.witness["j"], 1);
    }
    let mut m = Manifest::new("verify-modular", RingKind::F2);
    m.n = Some(2);
    assert!(run(&m, &store).is_err());
    m.experimental = true;
    let r = run(&m, &store).unwrap();
    assert_eq!(r.exit_code(), 3, "{}", r.summary());
}

#[test]
fn too_small_truncation_is_never_a_pass() {
    let store = ProjectorStore::default();
    let mut m = Manifest::new("verify-modular", RingKind::F2);
    (m.n, m.k, m.trunc) = (Some(1), Some(1), Some(2));
    let r = run(&m, &store).unwrap();
    let main = r.checks.last().unwrap();
    assert_ne!(main.outcome, Outcome::Pass, "{}", r.summary());
    assert_ne!(r.exit_code(), 0);
}

#[test]
fn oracle_pipelines() {
    let store = ProjectorStore::default();
    for (p, n) in [
        ("oracle-jones-wenzl", 4),
        ("oracle-through-projectors", 3),
        ("oracle-modular-decat", 1),
        ("oracle-matrices", 0),
    ] {
        let mut m = Manifest::new(p, RingKind::Z);
        m.n = Some(n);
        let r = run(&m, &store).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.summary());
    }
    let mut m = Manifest::new("oracle-bracket", RingKind::Q);
    (m.n, m.word, m.closure) = (Some(3), Some("s1 s2^-1 s1 s2^-1".into()), true);
    assert_eq!(run(&m, &store).unwrap().exit_code(), 0);
    let mut m = Manifest::new("oracle-matrices", RingKind::Z);
    m.budget_states = 2;
    assert_eq!(run(&m, &store).unwrap().exit_code(), 3);
    assert!(run(&Manifest::new("nope", RingKind::Z), &store).is_err());
}
