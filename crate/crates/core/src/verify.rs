//! Reproducible checks that assemble the other modules: kernel
//! intersections of unipotent representations, the perfect pairing and
//! exact sequence for Massey classes, the duality formula, two-fold Massey
//! products, small unipotent groups and the two descriptions of the
//! filtration.
//!
//! Every verifier returns a [`VerificationReport`]; random choices come
//! from a ChaCha8 generator seeded from the report's `seed`.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cohomology::dense;
use crate::cohomology::pairing::{transgression_classes, PairingContext};
use crate::cohomology::{cup, generator_characters, massey, massey_word, Cochain1, CoboundarySolver};
use crate::error::Result;
use crate::free_group::{filtration_generators, GroupWord};
use crate::group::{center, element_order, exponent, is_abelian, subgroup_generated, FiniteGroup, GroupTable};
use crate::linalg::{rank, relations, EchelonBasis, FpVec};
use crate::magnus::epsilon;
use crate::quotient::{Quotient, DEFAULT_ORDER_BUDGET};
use crate::unipotent::{kernel_intersection, MatrixElement, UnipotentMatrix, DEFAULT_TUPLE_BUDGET};
use crate::word::Word;

/// Groups up to this order also get the dense kernel-of-inflation check.
pub const DENSE_CHECK_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: Params,
    pub status: Status,
    pub metrics: Map<String, Value>,
    pub witness: Option<Value>,
    pub seed: u64,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The report without timing, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let mut params = Vec::new();
        if let Some(k) = self.params.k {
            params.push(format!("k={k}"));
        }
        params.push(format!("p={}", self.params.p));
        if let Some(n) = self.params.n {
            params.push(format!("n={n}"));
        }
        if let Some(m) = self.params.m {
            params.push(format!("m={m}"));
        }
        if let Some(s) = self.params.samples {
            params.push(format!("samples={s}"));
        }
        writeln!(
            f,
            "{status} {} ({}) seed={} {} ms",
            self.theorem,
            params.join(", "),
            self.seed,
            self.wall_time_ms
        )?;
        for (key, value) in &self.metrics {
            writeln!(f, "  {key}: {value}")?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "  witness: {w}")?;
        }
        Ok(())
    }
}

/// Budgets and seed shared by the verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub order_budget: usize,
    pub tuple_budget: usize,
    /// Cap on each level list of filtration generators.
    pub word_budget: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            order_budget: DEFAULT_ORDER_BUDGET,
            tuple_budget: DEFAULT_TUPLE_BUDGET,
            word_budget: 4096,
            seed: 0,
        }
    }
}

struct Builder {
    theorem: &'static str,
    params: Params,
    metrics: Map<String, Value>,
    witness: Option<Value>,
    seed: u64,
    start: Instant,
}

impl Builder {
    fn new(theorem: &'static str, params: Params, seed: u64) -> Self {
        Builder {
            theorem,
            params,
            metrics: Map::new(),
            witness: None,
            seed,
            start: Instant::now(),
        }
    }

    fn metric(&mut self, key: &str, value: impl Serialize) {
        self.metrics
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable metric"));
    }

    fn witness(&mut self, value: Value) {
        if self.witness.is_none() {
            self.witness = Some(value);
        }
    }

    fn finish(self, pass: bool) -> VerificationReport {
        VerificationReport {
            theorem: self.theorem.to_string(),
            params: self.params,
            status: if pass { Status::Pass } else { Status::Fail },
            metrics: self.metrics,
            witness: self.witness,
            seed: self.seed,
            wall_time_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

/// The intersection of the kernels of all representations of
/// `S/S_{n+1}` into `U_n(F_p)` equals `S_n/S_{n+1}`.
pub fn verify_theorem_a(k: usize, p: u32, n: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut b = Builder::new(
        "A",
        Params {
            k: Some(k),
            p,
            n: Some(n),
            ..Params::default()
        },
        cfg.seed,
    );
    let q = Quotient::build_with_budget(k, p, n + 1, cfg.order_budget)?;
    let floor = q.filtration_image(n)?;
    let ki = kernel_intersection(&q, n, cfg.tuple_budget)?;
    b.metric("quotient_order", q.order());
    b.metric("filtration_order", floor.len());
    b.metric("intersection_order", ki.elements.len());
    b.metric("representations_examined", ki.representations_examined);
    b.metric("representations_total", ki.total_representations);
    let contains = floor.iter().all(|e| ki.elements.binary_search(e).is_ok());
    b.metric("contains_filtration", contains);
    if let Some(&e) = ki.elements.iter().find(|e| floor.binary_search(e).is_err()) {
        b.witness(json!({
            "element": e,
            "word": q.witness(e).to_string(),
            "degree": q.element_degree(e),
        }));
    }
    Ok(b.finish(ki.elements == floor))
}

/// Greedy basis of `S_n/S_{n+1}` inside `S/S_{n+1}` from degree-`n`
/// Magnus coordinates.
pub fn filtration_quotient_basis(hat: &Quotient, n: usize) -> Result<Vec<usize>> {
    let p = hat.prime();
    let len = hat.alphabet().pow(n as u32);
    let mut e = EchelonBasis::new(p, len);
    let mut basis = Vec::new();
    for s in hat.filtration_image(n)? {
        let coords: Vec<u32> = hat.degree_coords(s, n).iter().map(|&c| c as u32).collect();
        if e.insert(&FpVec::from_values(p, &coords)) {
            basis.push(s);
        }
    }
    Ok(basis)
}

/// Perfect pairing between `S_n/S_{n+1}` and the span of the `psi_w` in
/// `H^2(S/S_n)`, and equality of that span with the kernel of inflation.
pub fn verify_theorem_b(k: usize, p: u32, n: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut b = Builder::new(
        "B",
        Params {
            k: Some(k),
            p,
            n: Some(n),
            ..Params::default()
        },
        cfg.seed,
    );
    let ctx = PairingContext::with_budget(k, p, n, cfg.order_budget)?;
    let (base, hat) = (ctx.base(), ctx.hat());
    let base_solver = CoboundarySolver::new(base, p);
    let hat_solver = ctx.hat_solver();
    let clen = base_solver.coordinate_len();

    let basis = filtration_quotient_basis(hat, n)?;
    let words = Word::all_of_length(k, n);
    let psi: Vec<_> = words
        .iter()
        .map(|w| massey_word(base, w).map(|m| m.representative))
        .collect::<Result<_>>()?;
    let psi_vecs: Vec<FpVec> = psi.iter().map(|f| base_solver.class_vector(f)).collect();
    let psi_rank = rank(p, clen, &psi_vecs);
    let psi_relations = relations(p, clen, &psi_vecs, None);

    let eps: Vec<Vec<u32>> = words.iter().map(|w| hat.epsilon_values(w)).collect::<Result<_>>()?;
    let matrix: Vec<Vec<u32>> = basis.iter().map(|&s| eps.iter().map(|col| col[s]).collect()).collect();
    let matrix_rows: Vec<FpVec> = matrix.iter().map(|r| FpVec::from_values(p, r)).collect();
    let pairing_rank = rank(p, words.len(), &matrix_rows);
    let well_defined = psi_relations
        .iter()
        .all(|rel| matrix_rows.iter().all(|row| row.dot(rel) == 0));

    b.metric("quotient_order", hat.order());
    b.metric("base_order", base.order());
    b.metric("dim_filtration_quotient", basis.len());
    b.metric("dim_span_psi", psi_rank);
    b.metric("psi_relations", psi_relations.len());
    b.metric("pairing_rank", pairing_rank);
    b.metric("pairing_well_defined", well_defined);
    let part_a = well_defined && pairing_rank == basis.len() && pairing_rank == psi_rank;
    b.metric("perfect_pairing", part_a);
    if !part_a {
        b.witness(json!({
            "basis": basis.iter().map(|&s| hat.witness(s).to_string()).collect::<Vec<_>>(),
            "words": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "matrix": matrix,
        }));
    }

    // exactness: span psi = ker(inf) = image of transgression
    let mut all_inflate_trivially = true;
    for (w, f) in words.iter().zip(&psi) {
        let pr = ctx.projection();
        if !hat_solver.class_vector_fn(&|a, c| f.at(pr[a], pr[c])).is_zero() {
            all_inflate_trivially = false;
            b.witness(json!({ "psi_not_in_kernel": w.to_string() }));
        }
    }
    let trg: Vec<FpVec> = transgression_classes(&ctx)?
        .iter()
        .map(|(_, f)| base_solver.class_vector(f))
        .collect();
    let trg_rank = rank(p, clen, &trg);
    let joint: Vec<FpVec> = psi_vecs.iter().chain(&trg).cloned().collect();
    let joint_rank = rank(p, clen, &joint);
    b.metric("psi_inflate_to_coboundaries", all_inflate_trivially);
    b.metric("dim_transgression_image", trg_rank);
    b.metric("dim_psi_plus_transgression", joint_rank);
    let mut part_b = all_inflate_trivially && psi_rank == trg_rank && joint_rank == psi_rank;

    if base.order() <= DENSE_CHECK_LIMIT {
        let (h2, ker) = dense_inflation_kernel(&ctx, &base_solver, &hat_solver);
        let ker_rank = rank(p, clen, &ker);
        let joint: Vec<FpVec> = psi_vecs.iter().chain(&ker).cloned().collect();
        let joint_rank = rank(p, clen, &joint);
        b.metric("dense_dim_h2_base", h2);
        b.metric("dense_dim_inflation_kernel", ker_rank);
        part_b &= ker_rank == psi_rank && joint_rank == psi_rank;
    }
    b.metric("kernel_of_inflation_is_span_psi", part_b);
    Ok(b.finish(part_a && part_b))
}

/// `dim H^2(G)` and class vectors spanning `ker(H^2(G) -> H^2(Ĝ))`,
/// starting from a dense basis of the 2-cocycles of `G`.
fn dense_inflation_kernel(
    ctx: &PairingContext,
    base_solver: &CoboundarySolver<'_, Quotient>,
    hat_solver: &CoboundarySolver<'_, Quotient>,
) -> (usize, Vec<FpVec>) {
    let base = ctx.base();
    let p = base.prime();
    let n = base.order();
    let pr = ctx.projection();
    let z = dense::cocycle_basis(base, p);
    let a: Vec<FpVec> = z
        .iter()
        .map(|v| base_solver.class_vector_fn(&|s, t| v.get(s * n + t)))
        .collect();
    let bvecs: Vec<FpVec> = z
        .iter()
        .map(|v| hat_solver.class_vector_fn(&|s, t| v.get(pr[s] * n + pr[t])))
        .collect();
    let h2 = rank(p, base_solver.coordinate_len(), &a);
    let rels = relations(p, hat_solver.coordinate_len(), &bvecs, None);
    let kernel = rels
        .iter()
        .map(|lam| {
            let mut v = FpVec::zeros(p, base_solver.coordinate_len());
            for (t, at) in a.iter().enumerate() {
                v.add_scaled(lam.get(t), at);
            }
            v
        })
        .collect();
    (h2, kernel)
}

/// `(s, psi_w)' = eps_w(s)` for random `s in S_n` and all `|w| = n`, up to
/// one global sign fixed by the first nonzero value.
pub fn verify_fundamental_duality(
    k: usize,
    p: u32,
    n: usize,
    samples: usize,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let mut b = Builder::new(
        "duality",
        Params {
            k: Some(k),
            p,
            n: Some(n),
            samples: Some(samples),
            ..Params::default()
        },
        cfg.seed,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ctx = PairingContext::with_budget(k, p, n, cfg.order_budget)?;
    let solver = ctx.hat_solver();
    let gens = filtration_generators(n, p, k, cfg.word_budget, None)?;
    let sigmas: Vec<GroupWord> = (0..samples)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len).fold(GroupWord::identity(), |acc, _| {
                let g = &gens[rng.gen_range(0..gens.len())];
                let e = if rng.gen_bool(0.5) { 1 } else { -1 };
                acc.multiply(&g.power(e))
            })
        })
        .collect();
    let elements: Vec<usize> = sigmas.iter().map(|s| ctx.hat().evaluate(s)).collect::<Result<_>>()?;

    let mut sign: Option<u32> = None;
    let mut comparisons = 0usize;
    let mut nonzero = 0usize;
    let mut ok = true;
    for w in Word::all_of_length(k, n) {
        let psi = massey_word(ctx.base(), &w)?.representative;
        let x = ctx.lift(&solver, &psi)?;
        for (sigma, &e) in sigmas.iter().zip(&elements) {
            let lhs = ctx.evaluate(&x, e)?;
            let rhs = epsilon(&w, sigma, p);
            comparisons += 1;
            if rhs != 0 {
                nonzero += 1;
                let s = sign.get_or_insert_with(|| if lhs == rhs { 1 } else { p - 1 });
                if p == 2 && *s != 1 {
                    ok = false;
                }
            }
            let expected = (sign.unwrap_or(1) * rhs) % p;
            if lhs != expected {
                ok = false;
                b.witness(json!({
                    "sigma": sigma.to_string(),
                    "word": w.to_string(),
                    "pairing": lhs,
                    "epsilon": rhs,
                }));
            }
        }
    }
    b.metric("comparisons", comparisons);
    b.metric("nonzero_comparisons", nonzero);
    b.metric("generator_words", gens.len());
    b.metric("global_sign", match sign {
        Some(1) => 1i64,
        Some(_) => -1i64,
        None => 0i64,
    });
    Ok(b.finish(ok && sign.is_some()))
}

/// `<c_1, c_2> = -c_1 u c_2` in `H^2(S/S_2)` for all pairs of generator
/// characters, plus the zero character in each slot.
pub fn verify_massey_cup(k: usize, p: u32, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut b = Builder::new(
        "massey-cup",
        Params {
            k: Some(k),
            p,
            ..Params::default()
        },
        cfg.seed,
    );
    let q = Quotient::build_with_budget(k, p, 2, cfg.order_budget)?;
    let solver = CoboundarySolver::new(&q, p);
    let chars = generator_characters(&q)?;
    let zero = Cochain1::zero(p, q.order());
    let mut pairs = 0;
    let mut zero_cases = 0;
    let mut ok = true;
    let mut check = |c1: &Cochain1, c2: &Cochain1, label: Value| -> Result<bool> {
        let m = massey(&q, &[c1.clone(), c2.clone()])?.representative;
        let c = cup(c1, c2)?.neg();
        let same = solver.cohomologous(&m, &c).is_some();
        if !same {
            b.witness(label);
        }
        Ok(same)
    };
    for i in 0..k {
        for j in 0..k {
            pairs += 1;
            ok &= check(&chars[i], &chars[j], json!({ "pair": [i, j] }))?;
        }
        zero_cases += 2;
        ok &= check(&zero, &chars[i], json!({ "pair": ["zero", i] }))?;
        ok &= check(&chars[i], &zero, json!({ "pair": [i, "zero"] }))?;
    }
    b.metric("quotient_order", q.order());
    b.metric("pairs_checked", pairs);
    b.metric("zero_cases_checked", zero_cases);
    Ok(b.finish(ok))
}

/// `U_3(F_p)` as a table, generated by the two elementary matrices.
pub fn unitriangular_group(p: u32) -> Result<GroupTable> {
    let all = UnipotentMatrix::enumerate(3, p)?;
    let gens = vec![
        UnipotentMatrix::elementary(3, p, 0, 1, 1)?.index(),
        UnipotentMatrix::elementary(3, p, 1, 2, 1)?.index(),
    ];
    GroupTable::from_fn(all.len(), gens, |a, b| all[a].mul(&all[b]).index())
}

/// `U_3(F_2)` is dihedral of order 8; `U_3(F_p)` for odd `p` is the
/// nonabelian group of order `p^3` and exponent `p`.
pub fn identify_small_groups(p: u32, cfg: &VerifyConfig) -> Result<VerificationReport> {
    crate::require_prime(p)?;
    let mut b = Builder::new(
        "small-groups",
        Params {
            p,
            ..Params::default()
        },
        cfg.seed,
    );
    let g = unitriangular_group(p)?;
    let order = g.order();
    let abelian = is_abelian(&g);
    let exp = exponent(&g);
    let z = center(&g).len();
    b.metric("order", order);
    b.metric("abelian", abelian);
    b.metric("exponent", exp);
    b.metric("center_order", z);
    let pu = p as usize;
    let ok = if p == 2 {
        let (r, s) = (g.generators()[0], g.generators()[1]);
        let gens_are_involutions = element_order(&g, r) == 2 && element_order(&g, s) == 2;
        let product_order = element_order(&g, g.mul(r, s));
        b.metric("generator_orders", [element_order(&g, r), element_order(&g, s)]);
        b.metric("generator_product_order", product_order);
        b.metric("identified_as", "D4");
        order == 8 && !abelian && exp == 4 && z == 2 && gens_are_involutions && product_order == 4
    } else {
        b.metric("identified_as", format!("Heisenberg group of order {}", pu.pow(3)));
        order == pu.pow(3) && !abelian && exp == pu && z == pu
    };
    Ok(b.finish(ok))
}

/// Subgroups generated by the recursive filtration words agree with the
/// Magnus filtration in `S/S_m` at every level.
pub fn verify_filtration_agreement(k: usize, p: u32, m: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut b = Builder::new(
        "filtration",
        Params {
            k: Some(k),
            p,
            m: Some(m),
            ..Params::default()
        },
        cfg.seed,
    );
    let q = Quotient::build_with_budget(k, p, m, cfg.order_budget)?;
    let mut ok = true;
    let mut levels = Vec::new();
    for n in 1..=m {
        let words = filtration_generators(n, p, k, cfg.word_budget, Some(&q))?;
        let seeds: Vec<usize> = words.iter().map(|w| q.evaluate(w)).collect::<Result<_>>()?;
        let generated = subgroup_generated(&q, &seeds);
        let magnus = q.filtration_image(n)?;
        let agree = generated == magnus;
        levels.push(json!({
            "n": n,
            "generator_words": words.len(),
            "generated_order": generated.len(),
            "filtration_order": magnus.len(),
            "agree": agree,
        }));
        if !agree {
            ok = false;
            b.witness(json!({ "level": n, "generated": generated.len(), "magnus": magnus.len() }));
        }
    }
    b.metric("quotient_order", q.order());
    b.metric("levels", levels);
    Ok(b.finish(ok))
}

/// The standard verification matrix, or the extended one.
pub fn run_all(extended: bool, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for p in [2, 3] {
        out.push(identify_small_groups(p, cfg)?);
    }
    for (k, p, m) in [(2, 2, 3), (2, 2, 4), (2, 3, 3)] {
        out.push(verify_filtration_agreement(k, p, m, cfg)?);
    }
    for p in [2, 3] {
        out.push(verify_massey_cup(2, p, cfg)?);
    }
    let standard = [(2, 2, 2), (2, 2, 3), (2, 3, 2)];
    let extended_cases = [(2, 2, 4), (3, 2, 3)];
    let cases: Vec<(usize, u32, usize)> = if extended {
        standard.iter().chain(&extended_cases).copied().collect()
    } else {
        standard.to_vec()
    };
    for &(k, p, n) in &cases {
        out.push(verify_theorem_a(k, p, n, cfg)?);
    }
    for &(k, p, n) in &cases {
        out.push(verify_fundamental_duality(k, p, n, 20, cfg)?);
    }
    for &(k, p, n) in &cases {
        out.push(verify_theorem_b(k, p, n, cfg)?);
    }
    Ok(out)
}
