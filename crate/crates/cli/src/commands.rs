//! Subcommand drivers and their text renderings.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use wakimoto_core::affine::{verify_all, Realization, Status, VerificationReport};
use wakimoto_core::characters::{
    fock_character, is_generic, kk_character, solve_kk_for_chi, verma_character, AffineRoot, CharacterDiff, CharacterEntry,
    GenericityCertificate, RootDatum, Weight,
};
use wakimoto_core::fields::wakimoto_currents_a22;
use wakimoto_core::fock::{FockSpace, FreeFieldData, Mode};
use wakimoto_core::scalar::fmt_q;
use wakimoto_core::singular::{contragredient_scan, find_singular, permuted_kernel_dim, weight_blocks, SingularReport};

use crate::config::RunConfig;
use crate::CliError;

/// A finished command: its JSON payload, text rendering and exit status.
pub struct Outcome {
    pub result: serde_json::Value,
    pub text: String,
    pub success: bool,
}

fn json<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn data() -> Arc<FreeFieldData> {
    Arc::new(FreeFieldData::a2_2())
}

fn space(cfg: &RunConfig, d: Mode) -> Result<FockSpace, CliError> {
    let chi = vec![cfg.chi.clone()];
    let sp = if cfg.restricted { FockSpace::restricted(data(), chi)? } else { FockSpace::wakimoto(data(), cfg.k.clone(), chi)? };
    Ok(sp.truncated(d, cfg.depth))
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.d < cfg.mode_bound.times(2) {
        return Err(CliError::Usage(format!("verify needs D ≥ 2·mode-bound, got D = {} and mode-bound = {}", cfg.d, cfg.mode_bound)));
    }
    let sp = space(cfg, cfg.d)?;
    let rep = verify_all(&wakimoto_currents_a22(), &sp, cfg.mode_bound, std::slice::from_ref(&cfg.k))?;
    Ok(Outcome { text: render_verify(&rep), success: rep.all_pass(), result: json(&rep) })
}

fn render_verify(rep: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "level {}  χ = [{}]  D = {}  depth = {}  |m| ≤ {}",
        rep.levels.join(", "),
        rep.chi.join(", "),
        rep.max_degree,
        rep.depth,
        rep.mode_bound
    );
    for e in rep.entries.iter().filter(|e| e.status == Status::Fail) {
        let _ = writeln!(
            s,
            "FAIL [{}_{}, {}_{}]  {} of {} vectors  first: {:?}",
            e.pair.0, e.modes.0, e.pair.1, e.modes.1, e.failures, e.vectors_checked, e.discrepancy
        );
    }
    let _ = write!(s, "checked {}  passed {}  failed {}", rep.checked, rep.passed, rep.failed);
    s
}

#[derive(Serialize)]
struct CharReport {
    space: &'static str,
    reference: &'static str,
    max_degree: Mode,
    depth: i64,
    fock: Vec<CharacterEntry>,
    reference_entries: Vec<CharacterEntry>,
    diff: Vec<CharacterDiff>,
}

pub fn character(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sp = space(cfg, cfg.d)?;
    let datum = RootDatum::a2_2();
    let fock = fock_character(&sp, cfg.d)?;
    let (reference, rhs) = if cfg.restricted {
        ("real-root product", kk_character(cfg.d, cfg.depth, &datum))
    } else {
        ("verma", verma_character(cfg.d, cfg.depth, &datum))
    };
    let diff = fock.diff(&rhs);
    let rep = CharReport {
        space: if cfg.restricted { "restricted" } else { "wakimoto" },
        reference,
        max_degree: cfg.d,
        depth: cfg.depth,
        fock: fock.entries(),
        reference_entries: rhs.entries(),
        diff,
    };
    let mut s = String::new();
    let refs = rhs.entries();
    for e in &rep.fock {
        let r = refs.iter().find(|x| x.shift == e.shift && x.degree == e.degree).map_or(0, |x| x.dim);
        let _ = writeln!(s, "shift {:>3}  degree {:>4}  fock {:>6}  {} {:>6}", e.shift, e.degree.to_string(), e.dim, reference, r);
    }
    if !rep.diff.is_empty() {
        let _ = writeln!(s, "DIFF");
        for d in &rep.diff {
            let _ = writeln!(s, "shift {:>3}  degree {:>4}  fock {:>6}  {} {:>6}", d.shift, d.degree.to_string(), d.left, reference, d.right);
        }
    }
    Ok(Outcome { text: s.trim_end().to_string(), success: rep.diff.is_empty(), result: json(&rep) })
}

#[derive(Serialize)]
struct KkReport {
    chi: String,
    certificate: GenericityCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    solved: Option<Solved>,
}

#[derive(Serialize)]
struct Solved {
    root: String,
    n: u32,
    chi: Option<String>,
}

/// `root` is `"finite,delta"`, e.g. `-1,1/2` for −α + δ/2.
pub fn kk(cfg: &RunConfig, root: Option<&str>, n: u32) -> Result<Outcome, CliError> {
    let k = cfg.numeric_level()?;
    let datum = RootDatum::a2_2();
    let chi = Weight::highest(vec![cfg.chi.clone()], k.clone());
    let cert = is_generic(&chi, cfg.genericity_bound, &datum);
    let solved = match root {
        Some(r) => {
            let (f, d) = r.split_once(',').ok_or_else(|| CliError::Usage(format!("--root wants finite,delta; got {r:?}")))?;
            let finite: i64 = f.trim().parse().map_err(|_| CliError::Usage(format!("bad root {r:?}")))?;
            let delta: Mode = d.parse().map_err(|e: wakimoto_core::Error| CliError::Usage(e.to_string()))?;
            let beta = AffineRoot::new(finite, delta);
            Some(Solved { root: beta.to_string(), n, chi: solve_kk_for_chi(&beta, n, &k, &datum).map(|c| fmt_q(&c)) })
        }
        None => None,
    };
    let mut s = format!("χ = {chi}\ngeneric: {}\nbound: {}  roots scanned: {}", cert.generic, cert.bound, cert.roots_scanned);
    for (b, m) in &cert.witnesses {
        let _ = write!(s, "\nwitness: β = {b}, n = {m}");
    }
    if let Some(x) = &solved {
        let _ = write!(s, "\nsolve β = {}, n = {}: c1 = {}", x.root, x.n, x.chi.as_deref().unwrap_or("none"));
    }
    let rep = KkReport { chi: chi.to_string(), certificate: cert, solved };
    Ok(Outcome { text: s, success: rep.certificate.generic, result: json(&rep) })
}

#[derive(Serialize)]
struct SingularOut {
    #[serde(flatten)]
    report: SingularReport,
    permutation_rerun: PermutationRerun,
}

#[derive(Serialize)]
struct PermutationRerun {
    seed: u64,
    blocks: usize,
    consistent: bool,
}

pub fn singular(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.numeric_level()?;
    let cur = wakimoto_currents_a22();
    let (report, real) = if cfg.contragredient {
        let rep = contragredient_scan(vec![cfg.chi.clone()], &cur, cfg.deg, cfg.depth, cfg.raising, cfg.genericity_bound)?;
        let sp = FockSpace::dual_restricted(data(), vec![cfg.chi.clone()])?.truncated(cfg.deg, cfg.depth);
        (rep, Realization::new(cur, sp)?)
    } else {
        // at the critical level the scan runs on W̄, whose character is the real-root product
        let chi = vec![cfg.chi.clone()];
        let sp = if cfg.is_critical() { FockSpace::restricted(data(), chi)? } else { FockSpace::wakimoto(data(), cfg.k.clone(), chi)? };
        let real = Realization::new(cur, sp.truncated(cfg.deg, cfg.depth))?;
        (find_singular(&real, cfg.deg, cfg.raising, cfg.genericity_bound)?, real)
    };
    let blocks = weight_blocks(&real.space, cfg.deg, &real.currents.labels(), cfg.raising);
    let mut consistent = true;
    for (i, b) in blocks.iter().enumerate() {
        let expect = report.singular.iter().find(|k| k.shift == b.shift && k.degree == b.degree).map_or(0, |k| k.kernel_dim);
        consistent &= permuted_kernel_dim(b, &real, cfg.seed.wrapping_add(i as u64))? == expect;
    }
    let out = SingularOut { report, permutation_rerun: PermutationRerun { seed: cfg.seed, blocks: blocks.len(), consistent } };
    let r = &out.report;
    let mut s = format!("{} at k = {}, χ = [{}], degree ≤ {}, depth {}\n", r.space, r.level, r.chi.join(", "), r.deg_bound, r.depth);
    let _ = writeln!(s, "{:>6} {:>7} {:>6} {:>7}", "shift", "degree", "dim", "kernel");
    for k in &r.singular {
        let _ = writeln!(s, "{:>6} {:>7} {:>6} {:>7}", k.shift, k.degree.to_string(), k.dim, k.kernel_dim);
        for v in &k.kernel {
            let terms: Vec<String> = v.iter().map(|(m, c)| format!("{c}·{m}")).collect();
            let _ = writeln!(s, "    {}", terms.join(" + "));
        }
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(s, "generic (bound {}): {}", c.bound, c.generic);
    }
    let _ = writeln!(s, "blocks scanned: {}  permutation re-run consistent: {}", r.blocks_scanned, consistent);
    let _ = write!(s, "vacuum only: {}", r.vacuum_only);
    let success = r.vacuum_only && consistent;
    Ok(Outcome { text: s, success, result: json(&out) })
}

#[derive(Serialize)]
struct CurrentsOut {
    currents: Vec<(String, String)>,
    derived: Vec<DerivedOut>,
}

#[derive(Serialize)]
struct DerivedOut {
    label: String,
    from: (String, String),
    c: String,
}

pub fn dump_currents() -> Result<Outcome, CliError> {
    let cur = wakimoto_currents_a22();
    let out = CurrentsOut {
        currents: cur.iter().map(|(l, f)| (l.to_string(), f.render(cur.data()))).collect(),
        derived: cur
            .derived()
            .iter()
            .map(|d| DerivedOut { label: d.label.to_string(), from: (d.from.0.to_string(), d.from.1.to_string()), c: fmt_q(&d.c) })
            .collect(),
    };
    let mut s = cur.render();
    for d in &out.derived {
        let _ = write!(s, "\n# {} derived from [{}, {}] = {}·{}", d.label, d.from.0, d.from.1, d.c, d.label);
    }
    Ok(Outcome { text: s, success: true, result: json(&out) })
}
