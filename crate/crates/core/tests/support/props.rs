//! Property checks driven by a seed. Each returns `Err` with a description of
//! the first violated assertion.

use std::cell::Cell;

use opcert::free_algebra::{word_divisions, Polynomial, Word};
use opcert::groebner::{membership_certificate, GbConfig, MembershipOutcome};
use opcert::quiver::LabelledQuiver;
use opcert::representation::{check_representation_consistency, realize, RepresentationConsistency};
use opcert::rewriting::{reduce, replay, rewrite_step};
use opcert::textio::{parse_certificate, parse_polynomial, serialize_certificate};
use opcert::theorem::{
    check_certificate, prove_identity, q_consequence_decomposition, CheckResult, Instance, ProveOutcome,
    QConsequenceOutcome,
};
use opcert::MonomialOrder;
use rand::seq::SliceRandom;
use rand::Rng;

use super::*;

pub type Check = Result<(), String>;

thread_local! {
    static SKIPPED: Cell<usize> = const { Cell::new(0) };
}

/// A case whose random input did not meet the property's hypotheses.
fn skip() -> Check {
    SKIPPED.with(|c| c.set(c.get() + 1));
    Ok(())
}

/// Number of skipped cases since the last call.
pub fn take_skipped() -> usize {
    SKIPPED.with(|c| c.replace(0))
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn has_zero_coeff(p: &Polynomial) -> bool {
    p.terms().any(|(_, c)| c.is_zero())
}

pub fn ring_axioms(seed: u64) -> Check {
    let r = &mut rng(seed);
    let f = poly(r, 3, 4, 3);
    let g = poly(r, 3, 4, 3);
    let h = poly(r, 3, 4, 3);
    ensure!(&(&f * &g) * &h == &f * &(&g * &h), "associativity");
    ensure!(&f * &(&g + &h) == &(&f * &g) + &(&f * &h), "left distributivity");
    ensure!(&(&f + &g) * &h == &(&f * &h) + &(&g * &h), "right distributivity");
    ensure!(&f + &g == &g + &f, "additive commutativity");
    ensure!((&f + &(-&f)).is_zero() && (&(&f + &g) - &g) == f, "additive inverse");
    ensure!(&f * &Polynomial::one() == f && &Polynomial::one() * &f == f, "unit");
    for p in [&f * &g, &f + &g, &f - &g, f.scale(&coeff(r))] {
        ensure!(!has_zero_coeff(&p), "stored zero coefficient");
    }
    Ok(())
}

pub fn divisions_match_brute_force(seed: u64) -> Check {
    let r = &mut rng(seed);
    let m = word(r, 2, 0, 8);
    let d = word(r, 2, 0, 3);
    let mut brute = Vec::new();
    let (ml, dl) = (m.letters(), d.letters());
    if dl.len() <= ml.len() {
        for start in 0..=ml.len() - dl.len() {
            if ml[start..start + dl.len()] == *dl {
                brute.push((m.slice(0..start), m.slice(start + dl.len()..ml.len())));
            }
        }
    }
    let found = word_divisions(&m, &d);
    ensure!(found == brute, "divisions of {m:?} by {d:?}: {found:?} vs {brute:?}");
    for (a, b) in &found {
        ensure!(d.sandwich(a, b) == m, "a·d·b != m");
    }
    Ok(())
}

pub fn leading_monomial_multiplicative(seed: u64) -> Check {
    let r = &mut rng(seed);
    let f = nonzero_poly(r, 3, 4, 3);
    let g = nonzero_poly(r, 3, 4, 3);
    let ord = MonomialOrder::DegLex;
    let (mf, _) = f.leading_monomial(ord).unwrap();
    let (mg, _) = g.leading_monomial(ord).unwrap();
    let (mfg, _) = (&f * &g).leading_monomial(ord).unwrap();
    ensure!(mfg == mf.concat(&mg), "lm(fg) != lm(f)·lm(g)");
    Ok(())
}

pub fn signature_matches_path_enumeration(seed: u64) -> Check {
    let r = &mut rng(seed);
    let q = quiver(r, 3, 6, 12, QuiverShape::Any);
    for _ in 0..4 {
        let m = word(r, 3, 0, 5);
        let fast = q.signature_of_monomial(&m);
        let slow = enumerate_signature(&q, &m);
        ensure!(fast == slow, "σ({m:?}) = {fast:?}, enumeration gives {slow:?}");
    }
    Ok(())
}

pub fn sum_law(seed: u64) -> Check {
    let r = &mut rng(seed);
    let q = quiver(r, 3, 4, 8, QuiverShape::Any);
    let f = poly(r, 3, 3, 3);
    let g = poly(r, 3, 3, 3);
    let (sf, sg) = (q.signature_of_poly(&f), q.signature_of_poly(&g));
    let sum = &f + &g;
    ensure!(sf.intersect(&sg).is_subset(&q.signature_of_poly(&sum)), "σ(f+g) ⊉ σ(f)∩σ(g)");
    for m in f.support() {
        ensure!(sf.is_subset(&q.signature_of_monomial(m)), "σ(f) ⊄ σ(m)");
    }
    if let (Some(u), Some(v)) = (uniform_poly(r, &q, 3, 3), uniform_poly(r, &q, 3, 3)) {
        let su = q.signature_of_poly(&u);
        if su == q.signature_of_poly(&v) {
            let s = &u + &v;
            ensure!(s.is_zero() || q.is_uniformly_compatible(&s), "sum of uniform polys not uniform");
        }
    }
    Ok(())
}

pub fn product_law(seed: u64) -> Check {
    let r = &mut rng(seed);
    let q = quiver(r, 3, 4, 8, QuiverShape::Any);
    let f = poly(r, 3, 3, 3);
    let g = poly(r, 3, 3, 3);
    let composite = q.signature_of_poly(&g).then(&q.signature_of_poly(&f));
    ensure!(composite.is_subset(&q.signature_of_poly(&(&f * &g))), "σ(fg) ⊉ σ(g)∘σ(f)");
    if let (Some(u), Some(v)) = (uniform_poly(r, &q, 3, 2), uniform_poly(r, &q, 3, 2)) {
        let composite = q.signature_of_poly(&v).then(&q.signature_of_poly(&u));
        if !composite.is_empty() {
            let p = &u * &v;
            ensure!(q.signature_of_poly(&p) == composite, "σ(fg) != σ(g)∘σ(f) for uniform factors");
            ensure!(q.is_uniformly_compatible(&p), "product of uniform polys not uniform");
        }
    }
    Ok(())
}

pub fn rewriting_step_closure(seed: u64) -> Check {
    let r = &mut rng(seed);
    let q = quiver(r, 3, 4, 8, QuiverShape::Any);
    let (Some(f), Some(g)) = (compatible_poly(r, &q, 3, 4), uniform_poly(r, &q, 3, 2)) else {
        return skip();
    };
    let mut steps = Vec::new();
    for m in f.support() {
        for mg in g.support() {
            for (a, b) in word_divisions(m, mg) {
                steps.push((a, b));
            }
        }
    }
    let Some((a, b)) = steps.choose(r).cloned() else {
        return skip();
    };
    let h = rewrite_step(&f, &g, &a, &b, &coeff(r)).map_err(|e| e.to_string())?;
    let agb = g.sandwich(&a, &b);
    let sf = q.signature_of_poly(&f);
    ensure!(q.is_compatible(&h), "h incompatible");
    ensure!(q.is_uniformly_compatible(&Polynomial::word(a.clone())), "a not uniform");
    ensure!(q.is_uniformly_compatible(&Polynomial::word(b.clone())), "b not uniform");
    ensure!(q.is_uniformly_compatible(&agb), "agb not uniform");
    ensure!(sf.is_subset(&q.signature_of_poly(&h)), "σ(h) ⊉ σ(f)");
    ensure!(sf.is_subset(&q.signature_of_poly(&agb)), "σ(agb) ⊉ σ(f)");
    Ok(())
}

pub fn reduction_laws(seed: u64) -> Check {
    let r = &mut rng(seed);
    let n = r.gen_range(1..=3);
    let rewriters: Vec<Polynomial> = (0..n).map(|_| nonzero_poly(r, 3, 3, 3)).collect();
    let f = poly(r, 3, 6, 5);
    let result = reduce(&f, &rewriters, MonomialOrder::DegLex);
    ensure!(result.recombine(&rewriters) == f, "f != nf − Σ λ·a·g·b");
    let again = reduce(&result.normal_form, &rewriters, MonomialOrder::DegLex);
    ensure!(again.normal_form == result.normal_form && again.trace.is_empty(), "not idempotent");
    for m in result.normal_form.support() {
        for g in &rewriters {
            ensure!(!m.contains_factor(g.leading_term().unwrap().0), "normal form reducible");
        }
    }
    let states = replay(&f, &rewriters, &result.trace).map_err(|e| e.to_string())?;
    ensure!(states.last() == Some(&result.normal_form), "replay diverges");
    Ok(())
}

/// A consistent representation where every edge of the quiver carries a
/// matrix, for quivers with distinct outgoing labels.
fn consistent_rep(r: &mut impl Rng, q: &LabelledQuiver) -> Option<opcert::representation::QuiverRepresentation> {
    let rep = representation(r, q, 3);
    match check_representation_consistency(&rep, q, 4).ok()? {
        RepresentationConsistency::Inconsistent(..) => None,
        _ => Some(rep),
    }
}

pub fn product_realization_law(seed: u64) -> Check {
    let r = &mut rng(seed);
    let q = quiver(r, 3, 4, 8, QuiverShape::DistinctOutgoing);
    let Some(rep) = consistent_rep(r, &q) else {
        return skip();
    };
    let (Some(f), Some(g)) = (compatible_poly(r, &q, 3, 3), compatible_poly(r, &q, 3, 3)) else {
        return skip();
    };
    let (sf, sg) = (q.signature_of_poly(&f), q.signature_of_poly(&g));
    let mut checked = 0;
    for (v, w) in sf.pairs() {
        for (u, v2) in sg.pairs() {
            if v2 != v {
                continue;
            }
            let fg = realize(&rep, &q, &(&f * &g), (u, w)).map_err(|e| e.to_string())?;
            let rf = realize(&rep, &q, &f, (v, w)).map_err(|e| e.to_string())?;
            let rg = realize(&rep, &q, &g, (u, v)).map_err(|e| e.to_string())?;
            ensure!(fg.matrix == &rf.matrix * &rg.matrix, "φ(fg) != φ(f)·φ(g) at ({u},{v},{w})");
            checked += 1;
        }
    }
    if checked == 0 {
        return skip();
    }
    Ok(())
}

pub fn realization_linearity(seed: u64) -> Check {
    let r = &mut rng(seed);
    let q = quiver(r, 3, 4, 8, QuiverShape::DistinctOutgoing);
    let Some(rep) = consistent_rep(r, &q) else {
        return skip();
    };
    let (Some(f), Some(g)) = (compatible_poly(r, &q, 3, 3), compatible_poly(r, &q, 3, 3)) else {
        return skip();
    };
    let c = coeff(r);
    let common = q.signature_of_poly(&f).intersect(&q.signature_of_poly(&g));
    if common.is_empty() {
        return skip();
    }
    for pair in common.pairs() {
        let rf = realize(&rep, &q, &f, pair).map_err(|e| e.to_string())?.matrix;
        let rg = realize(&rep, &q, &g, pair).map_err(|e| e.to_string())?.matrix;
        let sum = realize(&rep, &q, &(&f + &g), pair).map_err(|e| e.to_string())?.matrix;
        let scaled = realize(&rep, &q, &f.scale(&c), pair).map_err(|e| e.to_string())?.matrix;
        ensure!(sum == &rf + &rg, "φ(f+g) != φ(f)+φ(g)");
        ensure!(scaled == rf.scale(&c), "φ(cf) != c·φ(f)");
    }
    Ok(())
}

/// Random provable instance over a quiver with uniformly compatible
/// assumptions; the claim is a combination with compatible cofactors.
pub fn provable_instance(r: &mut impl Rng) -> Option<Instance> {
    let q = quiver(r, 3, 3, 6, QuiverShape::Any);
    let n = r.gen_range(1..=2);
    let gens: Vec<Polynomial> = (0..n).map(|_| uniform_poly(r, &q, 3, 3)).collect::<Option<_>>()?;
    let k = r.gen_range(0..n);
    let sig = q.signature_of_poly(&gens[k]);
    let &(v, w) = sig.pairs().choose(r)?;
    // extend the path at both ends
    let words = words_up_to(3, 1);
    let lefts: Vec<&Word> = words.iter().filter(|a| q.signature_of_monomial(a).sources().contains(&w)).collect();
    let rights: Vec<&Word> = words.iter().filter(|b| q.signature_of_monomial(b).targets().contains(&v)).collect();
    let a = (*lefts.choose(r)?).clone();
    let b = (*rights.choose(r)?).clone();
    let mut claim = gens[k].sandwich(&a, &b).scale(&coeff(r));
    if r.gen_bool(0.5) {
        let j = r.gen_range(0..n);
        claim = &claim + &gens[j].scale(&coeff(r));
    }
    let names = (0..n).map(|i| format!("f{}", i + 1));
    Instance::new(alphabet(3), names.zip(gens).collect(), claim, Some(q)).ok()
}

pub fn certificate_round_trip(seed: u64) -> Check {
    let r = &mut rng(seed);
    let Some(inst) = provable_instance(r) else {
        return skip();
    };
    let cfg = GbConfig {
        max_iterations: 200,
        ..GbConfig::default()
    };
    let outcome = prove_identity(&inst, cfg).map_err(|e| e.to_string())?;
    let ProveOutcome::Proved(cert) = outcome else {
        return skip();
    };
    ensure!(check_certificate(&cert) == CheckResult::Valid, "proved certificate does not check");
    let text = serialize_certificate(&cert);
    let parsed = parse_certificate(&text).map_err(|e| e.to_string())?;
    ensure!(parsed == *cert, "parse(serialize(c)) != c");
    ensure!(serialize_certificate(&parsed) == text, "serialization not byte stable");
    let again = prove_identity(&inst, cfg).map_err(|e| e.to_string())?;
    let ProveOutcome::Proved(again) = again else {
        return Err("second run differs".into());
    };
    ensure!(serialize_certificate(&again) == text, "certificate bytes not deterministic");
    Ok(())
}

pub fn q_consequence_verifies(seed: u64) -> Check {
    let r = &mut rng(seed);
    let Some(inst) = provable_instance(r) else {
        return skip();
    };
    let q = inst.quiver.as_ref().unwrap();
    if !q.is_compatible(&inst.claim) {
        return skip();
    }
    match q_consequence_decomposition(&inst.claim, &inst.assumptions, q, GbConfig::default()) {
        Ok(QConsequenceOutcome::Found(d)) => {
            ensure!(d.verify(q, &inst.assumptions, &inst.claim).is_ok(), "decomposition fails verification");
            Ok(())
        }
        Ok(QConsequenceOutcome::Inconclusive { .. }) => Ok(()),
        Err(e) => Err(e.to_string()),
    }
}

/// Display output parses back to the same polynomial.
pub fn display_parse_round_trip(seed: u64) -> Check {
    let r = &mut rng(seed);
    let a = alphabet(3);
    let f = poly(r, 3, 5, 4);
    let text = f.display(&a).to_string();
    let back = parse_polynomial(&text, &a).map_err(|e| format!("{text:?}: {e}"))?;
    ensure!(back == f, "{text:?} parsed differently");
    Ok(())
}

const TOKENS: &[&str] = &[
    "x", "y", "z", "q", "1", "0", "2/3", "7", "+", "-", "*", "/", "^", "(", ")", " ", "\n", "^2", "x1", "_", "#", ".",
    "é",
];

/// Random token soup must produce `Ok` or `Err`, never a panic.
pub fn parser_never_panics(seed: u64) -> Check {
    let r = &mut rng(seed);
    let a = alphabet(3);
    let n = r.gen_range(0..16);
    let text: String = (0..n).map(|_| *TOKENS.choose(r).unwrap()).collect();
    let outcome = std::panic::catch_unwind(|| parse_polynomial(&text, &a));
    ensure!(outcome.is_ok(), "parser panicked on {text:?}");
    Ok(())
}

fn oracle_generators(r: &mut impl Rng, nvars: usize) -> Vec<Polynomial> {
    let n = r.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let lead = word(r, nvars, 1, 3);
            let mut g = Polynomial::term(coeff(r), lead.clone());
            for _ in 0..r.gen_range(0..=2) {
                let w = word(r, nvars, 0, lead.len());
                if w != lead {
                    g.add_term(coeff(r), w);
                }
            }
            g
        })
        .collect()
}

/// Oracle agreement on one random instance built inside the ideal. Returns
/// the certificate's maximal degree.
pub fn oracle_instance(seed: u64) -> Result<usize, String> {
    let r = &mut rng(seed);
    let nvars = r.gen_range(1..=3);
    let gens = oracle_generators(r, nvars);
    let summands = r.gen_range(1..=3);
    let claim = ideal_element(r, &gens, nvars, 2, summands);
    let outcome = membership_certificate(&claim, &gens, GbConfig::default()).map_err(|e| e.to_string())?;
    let MembershipOutcome::Proved(cert) = outcome else {
        return Err(format!("inconclusive on seed {seed}"));
    };
    ensure!(cert.recombine(&gens).ok().as_ref() == Some(&claim), "certificate does not recombine");
    ensure!(
        truncated_membership(&gens, &claim, nvars, 6),
        "oracle rejects a claim built inside the ideal (seed {seed})"
    );
    Ok(cert.max_degree(&gens))
}

/// A random claim with no ideal structure: whenever the prover succeeds, the
/// oracle must confirm membership at the certificate's maximal degree.
pub fn oracle_soundness(seed: u64) -> Check {
    let r = &mut rng(seed);
    let nvars = r.gen_range(1..=2);
    let gens = oracle_generators(r, nvars);
    let claim = nonzero_poly(r, nvars, 3, 3);
    let cfg = GbConfig {
        max_degree: 6,
        max_iterations: 200,
        ..GbConfig::default()
    };
    let outcome = membership_certificate(&claim, &gens, cfg).map_err(|e| e.to_string())?;
    if let MembershipOutcome::Proved(cert) = outcome {
        let d = cert.max_degree(&gens);
        ensure!(cert.recombine(&gens).ok().as_ref() == Some(&claim), "certificate does not recombine");
        if d <= 6 {
            ensure!(truncated_membership(&gens, &claim, nvars, d), "proved but oracle finds no degree-{d} witness");
        }
    }
    Ok(())
}


/// Block inner inverse: `A = [[I_r, 0], [0, 0]]` and `A⁻ = [[I_r, X], [Y, Z]]`
/// satisfy `A·A⁻·A = A` for every X, Y, Z; the claim must then realize to zero.
pub fn inner_inverse_instantiation(seed: u64) -> Check {
    use opcert::representation::{verify_theorem_instance, QuiverRepresentation, TheoremInstance};
    let r = &mut rng(seed);
    let (m, n) = (r.gen_range(1..=4), r.gen_range(1..=4));
    let rank = r.gen_range(0..=m.min(n));
    let mut a = opcert::matrix::Matrix::zeros(n, m);
    let mut ai = matrix(r, m, n);
    for i in 0..rank {
        a.set(i, i, one());
        for j in 0..rank {
            ai.set(i, j, if i == j { one() } else { Rational::zero() });
        }
    }
    let y = matrix(r, m, n);
    let alpha = Alphabet::new(["a", "ai", "y"]).unwrap();
    let q = LabelledQuiver::from_names(
        &alpha,
        &["v", "w"],
        &[("v", "w", "a"), ("w", "v", "ai"), ("w", "v", "y")],
    )
    .map_err(|e| e.to_string())?;
    let g = parse_polynomial("a*ai*a - a", &alpha).unwrap();
    let f = parse_polynomial("a*(ai + y - y*a*ai)*a - a", &alpha).unwrap();
    let rep = QuiverRepresentation::new(&q, vec![m, n], vec![a.clone(), ai.clone(), y.clone()])
        .map_err(|e| e.to_string())?;
    let direct = &(&(&a * &(&(&ai + &y) - &(&(&y * &a) * &ai))) * &a) - &a;
    ensure!(direct.is_zero(), "direct matrix computation is nonzero");
    let verdict = verify_theorem_instance(&rep, &q, &[g], &f).map_err(|e| e.to_string())?;
    ensure!(verdict == TheoremInstance::ClaimHolds, "{verdict:?}");
    Ok(())
}
