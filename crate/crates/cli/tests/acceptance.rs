//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wakimoto_core::affine::{verify_all, verify_relation, Realization, Status, VerificationReport};
use wakimoto_core::characters::{fock_character, is_generic, kk_character, solve_kk_for_chi, verma_character, AffineRoot, CharacterSeries, RootDatum, Weight};
use wakimoto_core::fields::wakimoto_currents_a22;
use wakimoto_core::fock::{
    adjoint_holds, basis_up_to_degree, random_word, Family, FockSpace, FockVector, FreeFieldData, Mode, ModeGenerator, OscillatorWord,
};
use wakimoto_core::lie::{build_a2_2, GeneratorLabel};
use wakimoto_core::scalar::{q, qr};
use wakimoto_core::singular::{find_singular, restricted_realization, RaisingSet};
use wakimoto_core::{Level, Q};

type Check = Result<String, String>;

fn data() -> Arc<FreeFieldData> {
    Arc::new(FreeFieldData::a2_2())
}

fn levels() -> Vec<Level> {
    vec![Level::Value(q(0)), Level::Value(q(1)), Level::Value(qr(7, 3)), Level::Value(q(-3)), Level::Symbolic]
}

fn relation_space(level: Level) -> FockSpace {
    FockSpace::wakimoto(data(), level, vec![qr(1, 3)]).unwrap().truncated(Mode::int(2), 1)
}

fn criterion_1(rep: &VerificationReport) -> Check {
    let failed: Vec<_> = rep.entries.iter().filter(|e| e.status != Status::Pass).map(|e| format!("[{}_{}, {}_{}] at {}", e.pair.0, e.modes.0, e.pair.1, e.modes.1, e.level)).collect();
    let pairs: std::collections::BTreeSet<_> = rep.entries.iter().map(|e| e.pair.clone()).collect();
    if !failed.is_empty() {
        return Err(format!("{} failing relations, e.g. {}", failed.len(), failed[0]));
    }
    if pairs.len() != 64 || rep.levels.len() != 5 {
        return Err(format!("covered {} generator pairs at {} levels", pairs.len(), rep.levels.len()));
    }
    Ok(format!("{} relations on 64 generator pairs, levels {}, zero discrepancy", rep.checked, rep.levels.join(", ")))
}

fn criterion_2() -> Check {
    let (g, _) = build_a2_2();
    let h = GeneratorLabel::h(0, 1);
    let i = g.index_of(&h).unwrap();
    if *g.form_basis(i, i) != q(2) {
        return Err(format!("(H_(0,1), H_(0,1)) = {}", g.form_basis(i, i)));
    }
    let mut vectors = 0;
    for level in levels() {
        let real = Realization::new(wakimoto_currents_a22(), relation_space(level.clone())).unwrap();
        let r = verify_relation(&real, &h, Mode::int(1), &h, Mode::int(-1)).map_err(|e| e.to_string())?;
        if r.status != Status::Pass || r.central_term != "2k" {
            return Err(format!("level {level}: {:?}, central term {}", r.status, r.central_term));
        }
        if let Level::Value(k) = &level {
            let (p, m) = (real.operator(&h, Mode::int(1)).unwrap(), real.operator(&h, Mode::int(-1)).unwrap());
            for mono in basis_up_to_degree(&real.space, Mode::int(2)) {
                let v = FockVector::<Q>::monomial(mono);
                let c = p.apply(&m.apply(&v).unwrap()).unwrap().sub(&m.apply(&p.apply(&v).unwrap()).unwrap());
                if c != v.scaled(&(q(2) * k)) {
                    return Err(format!("level {k}: commutator is not 2k on the slice"));
                }
                vectors += 1;
            }
        }
    }
    Ok(format!("[H_(0,1)⊗t, H_(0,1)⊗t^-1] = 2k·id on {vectors} slice vectors and symbolically"))
}

/// Independent count of oscillator monomials by (shift, degree in halves).
fn brute_force(with_b: bool, max_halves: i64, depth: i64) -> BTreeMap<(i64, i64), u64> {
    let mut parts = Vec::new();
    for n in 1..=max_halves / 2 {
        parts.extend([(1, 2 * n), (-1, 2 * n)]);
        if with_b {
            parts.push((0, 2 * n));
        }
    }
    for n in (1..=max_halves).step_by(2) {
        parts.extend([(1, n), (2, n), (-1, n), (-2, n)]);
        if with_b {
            parts.push((0, n));
        }
    }
    let mut cur: BTreeMap<(i64, i64), u64> = (0..=depth + 2 * max_halves).map(|p| ((0, -p), 1)).collect();
    for (s, h) in parts {
        let mut next = BTreeMap::new();
        for (&(deg, sh), &n) in &cur {
            let mut e = 0;
            while deg + e * h <= max_halves {
                *next.entry((deg + e * h, sh + e * s)).or_insert(0) += n;
                e += 1;
            }
        }
        cur = next;
    }
    cur.into_iter().filter(|&((_, s), _)| s >= -depth).collect()
}

fn compare_with_brute(ch: &CharacterSeries, with_b: bool, depth: i64) -> Result<usize, String> {
    let bf = brute_force(with_b, 6, depth);
    for (&(h, s), &n) in &bf {
        if ch.coeff(s, Mode::new(h, 2)) != n {
            return Err(format!("block (shift {s}, degree {h}/2): {} vs brute force {n}", ch.coeff(s, Mode::new(h, 2))));
        }
    }
    if ch.entries().len() != bf.len() {
        return Err("block sets differ from brute force".into());
    }
    Ok(bf.len())
}

fn criterion_3() -> Check {
    let d3 = Mode::int(3);
    let datum = RootDatum::a2_2();
    let mut blocks = 0;
    for (k, chi) in [(Level::Value(q(1)), qr(2, 7)), (Level::Value(qr(7, 3)), q(0)), (Level::Symbolic, qr(-5, 2))] {
        let sp = FockSpace::wakimoto(data(), k.clone(), vec![chi]).unwrap().truncated(d3, 2);
        let ch = fock_character(&sp, d3).map_err(|e| e.to_string())?;
        let diff = ch.diff(&verma_character(d3, 2, &datum));
        if !diff.is_empty() {
            return Err(format!("k = {k}: {} coefficients differ, first {:?}", diff.len(), diff[0]));
        }
        blocks += compare_with_brute(&ch, true, 2)?;
    }
    Ok(format!("fock = verma through degree 3 at three (k, χ); {blocks} blocks match brute force"))
}

fn criterion_4() -> Check {
    let d3 = Mode::int(3);
    let sp = FockSpace::restricted(data(), vec![qr(7, 5)]).unwrap().truncated(d3, 2);
    let ch = fock_character(&sp, d3).map_err(|e| e.to_string())?;
    let diff = ch.diff(&kk_character(d3, 2, &RootDatum::a2_2()));
    if !diff.is_empty() {
        return Err(format!("{} coefficients differ, first {:?}", diff.len(), diff[0]));
    }
    let n = compare_with_brute(&ch, false, 2)?;
    Ok(format!("restricted character = real-root product through degree 3 ({n} blocks)"))
}

fn criterion_5() -> Check {
    let cur = wakimoto_currents_a22();
    let datum = RootDatum::a2_2();
    let cert = is_generic(&Weight::highest(vec![qr(7, 5)], q(-3)), 10, &datum);
    if !cert.generic || cert.vacuous {
        return Err(format!("c1 = 7/5 not certified generic: {:?}", cert.witnesses));
    }
    let real = restricted_realization(&cur, qr(7, 5), Mode::int(2), 2).unwrap();
    let rep = find_singular(&real, Mode::int(2), RaisingSet::Full, 10).map_err(|e| e.to_string())?;
    if !rep.vacuum_only {
        return Err(format!("c1 = 7/5 has kernels {:?}", rep.singular));
    }
    let beta = AffineRoot::new(-1, Mode::new(1, 2));
    let c1 = solve_kk_for_chi(&beta, 1, &q(-3), &datum).ok_or("no KK solution for −α + δ/2")?;
    let real = restricted_realization(&cur, c1.clone(), Mode::int(2), 2).unwrap();
    let bad = find_singular(&real, Mode::int(2), RaisingSet::Full, 10).map_err(|e| e.to_string())?;
    let (ds, dd) = beta.lowering_grade();
    let hit = bad.singular.iter().find(|k| k.shift == ds && k.degree == dd && k.kernel_dim > 0);
    match hit {
        Some(k) => Ok(format!(
            "c1 = 7/5 generic (bound 10) and vacuum-only over {} blocks; c1 = {c1} has a {}-dim kernel at shift {ds}, degree {dd}",
            rep.blocks_scanned, k.kernel_dim
        )),
        None => Err(format!("c1 = {c1}: no kernel at shift {ds}, degree {dd}")),
    }
}

fn criterion_6() -> Check {
    let d = data();
    let dv = FockSpace::dual(d.clone()).truncated(Mode::int(8), 10);
    let mv = FockSpace::beta_gamma(d.clone()).truncated(Mode::int(8), 10);
    let basis = |sp: FockSpace, deg: Mode| -> Vec<FockVector<Q>> { basis_up_to_degree(&sp.truncated(deg, 1), deg).into_iter().map(FockVector::monomial).collect() };
    let (vs, ws) = (basis(FockSpace::dual(d.clone()), Mode::int(2)), basis(FockSpace::beta_gamma(d.clone()), Mode::int(2)));
    let mut checked = 0usize;
    for family in [Family::A, Family::AStar] {
        for label in 0..3u8 {
            for n in Mode::coset_range(d.lattice_offset(family, label), Mode::int(-2), Mode::int(2)) {
                let word = OscillatorWord::new(vec![ModeGenerator::new(family, label, n)]);
                for w in &ws {
                    for v in &vs {
                        if !adjoint_holds(&word, v, &dv, w, &mv).map_err(|e| e.to_string())? {
                            return Err(format!("single oscillator {word:?} fails"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    let (vs, ws) = (basis(FockSpace::dual(d.clone()), Mode::int(1)), basis(FockSpace::beta_gamma(d.clone()), Mode::int(1)));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let word = random_word(&mut rng, &d, 4, Mode::new(3, 2));
        for w in &ws {
            for v in &vs {
                if !adjoint_holds(&word, v, &dv, w, &mv).map_err(|e| e.to_string())? {
                    return Err(format!("random word {word:?} fails"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("⟨v, A·w⟩ = ⟨T(A)·v, w⟩ on {checked} (word, pair) checks incl. 100 seeded random words"))
}

fn criterion_7(rep: &VerificationReport) -> Check {
    let cur = wakimoto_currents_a22();
    let derived: Vec<String> = cur.derived().iter().map(|d| d.label.to_string()).collect();
    let want = [GeneratorLabel::e(1, 2).to_string(), GeneratorLabel::e(1, -2).to_string()];
    if derived.len() != 2 || !want.iter().all(|w| derived.contains(w)) {
        return Err(format!("derived currents are {derived:?}"));
    }
    let involved: Vec<_> = rep.entries.iter().filter(|e| want.contains(&e.pair.0) || want.contains(&e.pair.1)).collect();
    let pass = involved.iter().all(|e| e.status == Status::Pass);
    if !pass || involved.is_empty() {
        return Err("relations involving the derived currents fail".into());
    }
    Ok(format!("{} derived from commutators; {} relations involving them pass", derived.join(", "), involved.len()))
}

fn criterion_8() -> Check {
    let bin = env!("CARGO_BIN_EXE_wakimoto");
    let runs: [&[&str]; 6] = [
        &["verify", "--k", "7/3", "--chi", "1/3", "--D", "1", "--mode-bound", "1/2"],
        &["verify", "--k", "symbolic", "--chi", "1/3", "--D", "1", "--mode-bound", "1/2"],
        &["char", "--k", "1", "--chi", "2/7", "--D", "3"],
        &["kk", "--k", "-3", "--chi", "7/5", "--bound", "10"],
        &["singular", "--k", "-3", "--chi", "7/5", "--deg", "1", "--seed", "7"],
        &["dump-currents"],
    ];
    for args in runs {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let o = Command::new(bin).args(args).args(["--output", "json"]).output().map_err(|e| e.to_string())?;
            if o.status.code() != Some(0) {
                return Err(format!("{args:?} exited with {:?}", o.status.code()));
            }
            outs.push(o.stdout);
        }
        if outs[0] != outs[1] {
            return Err(format!("{args:?}: outputs differ"));
        }
        let v: serde_json::Value = serde_json::from_slice(&outs[0]).map_err(|e| e.to_string())?;
        if v["schema"] != 1 {
            return Err(format!("{args:?}: missing schema 1"));
        }
    }
    Ok(format!("{} commands ran twice with byte-identical JSON", runs.len()))
}

fn main() {
    let cur = wakimoto_currents_a22();
    let t = Instant::now();
    let rep = verify_all(&cur, &relation_space(Level::Value(q(0))), Mode::int(1), &levels());
    let mut failed = 0;
    let mut report = |n: u32, r: Check, t: Instant| {
        match r {
            Ok(m) => println!("PASS criterion {n}: {m} ({:.1}s)", t.elapsed().as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {n}: {m}");
            }
        }
    };
    match &rep {
        Ok(rep) => report(1, criterion_1(rep), t),
        Err(e) => report(1, Err(e.to_string()), t),
    }
    let t = Instant::now();
    report(2, criterion_2(), t);
    let t = Instant::now();
    report(3, criterion_3(), t);
    let t = Instant::now();
    report(4, criterion_4(), t);
    let t = Instant::now();
    report(5, criterion_5(), t);
    let t = Instant::now();
    report(6, criterion_6(), t);
    let t = Instant::now();
    match &rep {
        Ok(rep) => report(7, criterion_7(rep), t),
        Err(e) => report(7, Err(e.to_string()), t),
    }
    let t = Instant::now();
    report(8, criterion_8(), t);
    if failed > 0 {
        std::process::exit(1);
    }
}
