//! Named verification tasks over a system, assembled into reports.
//!
//! Randomness: every task draws from ChaCha20 seeded with the config
//! seed on its own numbered stream (the task's index in `TASKS` plus
//! one), so task results are reproducible and independent of which
//! other tasks run alongside them.

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::MultiMatrixAlgebra;
use crate::approx::{
    exel_t_value, multiplier_defect_bound, ApproxCertificate, Multiplier, ScalarCertificate,
    SubsystemEmbedding,
};
use crate::config::RunConfig;
use crate::conv::CcElement;
use crate::covariant::{canonical_lambda, reduced_norm, CovariantPair};
use crate::equivariant::EquivariantPair;
use crate::error::{Result, TcdsError};
use crate::fell::{
    absorption_residual, absorption_unitary, kronecker_absorption, product_pair, regular_pair_of,
    Compression,
};
use crate::fourier::{reduced_algebra_dim, ReducedOperator};
use crate::lattice::LatticeWindow;
use crate::linalg;
use crate::module::{ModuleMap, ModuleVector};
use crate::regularity::classify;
use crate::report::{Report, TaskReport};
use crate::representation::Representation;
use crate::system::{axiom_witnesses, derived_identities_report, TwistedSystem};

/// All task names, in stream order.
pub const TASKS: [&str; 6] =
    ["axioms", "star-algebra", "fourier", "fell", "approx", "regularity"];

/// The default task set of each CLI command.
pub fn command_tasks(command: &str) -> Result<Vec<String>> {
    let tasks: &[&str] = match command {
        "verify" => &["axioms"],
        "algebra" => &["star-algebra"],
        "fourier" => &["fourier"],
        "fell" => &["fell"],
        "approx" => &["approx"],
        "regularity" => &["regularity"],
        other => {
            return Err(TcdsError::BadBuilder(format!("unknown command '{other}'")));
        }
    };
    Ok(tasks.iter().map(|t| t.to_string()).collect())
}

fn task_rng(seed: u64, task: &str) -> ChaCha20Rng {
    let idx = TASKS.iter().position(|t| *t == task).expect("known task") as u64;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(idx + 1);
    rng
}

/// Run a command (or its explicit task override) against a config.
/// Invalid input (unknown task, unbuildable description) is an error;
/// mathematical failures land in the report with witnesses.
pub fn run(command: &str, cfg: &RunConfig) -> Result<Report> {
    let tasks = if cfg.tasks.is_empty() { command_tasks(command)? } else { cfg.tasks.clone() };
    for t in &tasks {
        if !TASKS.contains(&t.as_str()) {
            return Err(TcdsError::BadBuilder(format!(
                "unknown task '{t}'; available: {}",
                TASKS.join(", ")
            )));
        }
    }
    let parts = cfg.system.build_parts()?;
    let name = parts.name.clone();
    let (algebra, group) = (parts.algebra.clone(), parts.group.clone());
    let (alpha, sigma) = (parts.alpha.clone(), parts.sigma.clone());
    let system = parts.build();

    let mut out = Vec::with_capacity(tasks.len());
    for task in &tasks {
        let mut rng = task_rng(cfg.seed, task);
        let report = match &system {
            Ok(sys) => {
                let body = match task.as_str() {
                    "axioms" => axioms_task(sys, cfg.tolerance),
                    "star-algebra" => star_algebra_task(sys, cfg.tolerance, cfg.samples, &mut rng),
                    "fourier" => fourier_task(sys, cfg.tolerance, cfg.samples, &mut rng),
                    "fell" => fell_task(sys, cfg.tolerance, cfg.samples, &mut rng),
                    "approx" => approx_task(sys, cfg.tolerance, cfg.samples, &mut rng),
                    "regularity" => regularity_task(sys, cfg.tolerance, cfg.samples, &mut rng),
                    _ => unreachable!("task list was validated"),
                };
                body.unwrap_or_else(|e| {
                    let mut t = TaskReport::new(task.clone());
                    t.fail(format!("task aborted: {e}"));
                    t
                })
            }
            Err(e) => {
                let mut t = TaskReport::new(task.clone());
                if task == "axioms" {
                    for w in axiom_witnesses(&algebra, &group, &alpha, &sigma) {
                        t.fail(w);
                    }
                }
                if t.witnesses.is_empty() {
                    t.fail(format!("system failed validation: {e}"));
                }
                t
            }
        };
        out.push(report);
    }
    Ok(Report::assemble(command, name, cfg.seed, cfg.tolerance, cfg.samples, out))
}

fn axioms_task(sys: &Arc<TwistedSystem>, tol: f64) -> Result<TaskReport> {
    let mut t = TaskReport::new("axioms");
    let ar = sys.axiom_report();
    t.residual("sigma_unitarity", ar.sigma_unitarity, tol);
    t.residual("cocycle_normalization", ar.normalization, tol);
    t.residual("identity_action", ar.identity_action, tol);
    t.residual("twisted_multiplicativity", ar.twisted_action, tol);
    t.residual("two_cocycle_identity", ar.cocycle, tol);
    let dr = derived_identities_report(sys);
    t.residual("derived_identity_automorphism", dr.identity_automorphism, tol);
    t.residual("derived_sigma_inverse_pair", dr.sigma_inverse_pair, tol);
    t.residual("derived_inverse_formula", dr.inverse_formula, tol);
    t.count("group_order", sys.order() as i64);
    t.count("algebra_dim", sys.algebra().dim() as i64);
    t.count("algebra_blocks", sys.algebra().num_blocks() as i64);
    t.count("twist_trivial", i64::from(sys.is_twist_trivial(tol)));
    t.count("twist_central", i64::from(sys.is_sigma_central(tol)));
    t.count("action_trivial", i64::from(sys.is_action_trivial(tol)));
    Ok(t)
}

fn star_algebra_task(
    sys: &Arc<TwistedSystem>,
    tol: f64,
    samples: usize,
    rng: &mut ChaCha20Rng,
) -> Result<TaskReport> {
    let mut t = TaskReport::new("star-algebra");
    let one = CcElement::one(sys);
    let mut assoc: f64 = 0.0;
    let mut antihom: f64 = 0.0;
    let mut involutive: f64 = 0.0;
    let mut unit: f64 = 0.0;
    let mut l1_sub: f64 = 0.0;
    let mut star_l1: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let f1 = CcElement::random(sys, rng);
        let f2 = CcElement::random(sys, rng);
        let f3 = CcElement::random(sys, rng);
        let left = f1.convolve(&f2).convolve(&f3);
        let right = f1.convolve(&f2.convolve(&f3));
        assoc = assoc.max((&left - &right).sup_norm());
        antihom =
            antihom.max((&f1.convolve(&f2).star() - &f2.star().convolve(&f1.star())).sup_norm());
        involutive = involutive.max((&f1.star().star() - &f1).sup_norm());
        unit = unit
            .max((&one.convolve(&f1) - &f1).sup_norm())
            .max((&f1.convolve(&one) - &f1).sup_norm());
        l1_sub =
            l1_sub.max((f1.convolve(&f2).l1_norm() - f1.l1_norm() * f2.l1_norm()).max(0.0));
        star_l1 = star_l1.max((f1.star().l1_norm() - f1.l1_norm()).abs());
    }
    t.residual("convolution_associativity", assoc, tol);
    t.residual("star_antihomomorphism", antihom, tol);
    t.residual("star_involutive", involutive, tol);
    t.residual("unit_element", unit, tol);
    t.residual("l1_submultiplicative", l1_sub, tol);
    t.residual("star_l1_isometry", star_l1, tol);

    // Exact product rule on point masses:
    // (a ⊙ δ_g) ∗ (b ⊙ δ_h) = a·α_g(b)·σ(g,h) ⊙ δ_{gh}.
    let mut delta_rule: f64 = 0.0;
    for g in sys.group().elements() {
        for h in sys.group().elements() {
            let a = sys.algebra().random_element(rng);
            let b = sys.algebra().random_element(rng);
            let lhs = CcElement::delta(sys, g, a.clone())
                .convolve(&CcElement::delta(sys, h, b.clone()));
            let coeff = &(&a * &sys.alpha_apply(g, &b)) * sys.sigma(g, h);
            let rhs = CcElement::delta(sys, sys.group().mul(g, h), coeff);
            delta_rule = delta_rule.max((&lhs - &rhs).sup_norm());
        }
    }
    t.residual("point_mass_product_rule", delta_rule, tol);
    Ok(t)
}

fn fourier_task(
    sys: &Arc<TwistedSystem>,
    tol: f64,
    samples: usize,
    rng: &mut ChaCha20Rng,
) -> Result<TaskReport> {
    let mut t = TaskReport::new("fourier");
    let mut recovery: f64 = 0.0;
    let mut chain_sup: f64 = 0.0;
    let mut chain_twisted: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    let mut positivity: f64 = 0.0;
    let mut routes: f64 = 0.0;
    let mut membership: f64 = 0.0;
    let mut idempotent: f64 = 0.0;
    let mut bimodular: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let f = CcElement::random(sys, rng);
        let x = ReducedOperator::from_cc(&f);
        recovery = recovery.max((&x.fourier() - &f).sup_norm());
        membership = membership.max(x.reduced_membership_residual());

        let sup = f.sup_norm();
        let twisted = f.twisted_norm();
        let reduced = x.norm();
        chain_sup = chain_sup.max(sup - twisted);
        chain_twisted = chain_twisted.max(twisted - reduced);

        let xx = x.adjoint().compose(&x);
        let ea = xx.e_a();
        parseval = parseval.max((&ea - &f.twisted_inner(&f)).norm());
        positivity = positivity.max((-ea.min_spectrum()).max(0.0));

        let hat = x.fourier();
        for g in sys.group().elements() {
            let via_expectation =
                x.compose(&ReducedOperator::lambda(sys, g).adjoint()).e_a();
            routes = routes.max((hat.coeff(g) - &via_expectation).norm());
        }

        let es = x.e_sigma();
        idempotent = idempotent.max(es.e_sigma().sub(&es).norm());
        let la = ReducedOperator::ell(sys, sys.algebra().random_element(rng));
        let lb = ReducedOperator::ell(sys, sys.algebra().random_element(rng));
        let sandwich = la.compose(&x).compose(&lb);
        bimodular = bimodular
            .max(sandwich.e_sigma().sub(&la.compose(&x.e_sigma()).compose(&lb)).norm());
    }
    t.residual("coefficient_recovery", recovery, tol);
    t.residual("reduced_membership", membership, tol);
    t.residual("norm_chain_sup_le_twisted", chain_sup.max(0.0), tol);
    t.residual("norm_chain_twisted_le_reduced", chain_twisted.max(0.0), tol);
    t.residual("expectation_parseval", parseval, tol);
    t.residual("expectation_positivity", positivity, tol);
    t.residual("coefficient_route_agreement", routes, tol);
    t.residual("conditional_expectation_idempotent", idempotent, tol);
    t.residual("conditional_expectation_bimodular", bimodular, tol);

    let rank = reduced_algebra_dim(sys)?;
    let expected = sys.order() * sys.algebra().dim();
    t.count("reduced_rank", rank as i64);
    t.count("expected_rank", expected as i64);
    t.check(rank == expected, format!("reduced rank {rank} differs from |G|·dim A = {expected}"));
    Ok(t)
}

fn fell_task(
    sys: &Arc<TwistedSystem>,
    tol: f64,
    samples: usize,
    rng: &mut ChaCha20Rng,
) -> Result<TaskReport> {
    let mut t = TaskReport::new("fell");
    let cov = canonical_lambda(sys);

    for (label, equi) in
        [("trivial", EquivariantPair::trivial(sys)), ("regular", EquivariantPair::regular(sys))]
    {
        let intertwine = absorption_residual(&equi, &cov)?;
        t.residual(&format!("absorption_intertwining_{label}"), intertwine, tol);
        let w = absorption_unitary(&equi, &cov)?;
        t.residual(&format!("absorption_unitary_{label}"), w.unitarity_residual(), tol);

        let prod = product_pair(&equi, &cov)?;
        let reg = regular_pair_of(&equi)?;
        let mut rel: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let f = CcElement::random(sys, rng);
            let a = prod.integrated(&f).norm();
            let b = reg.integrated(&f).norm();
            rel = rel.max((a - b).abs() / b.max(1e-15));
        }
        t.residual(&format!("absorption_norm_equality_{label}"), rel, tol.max(1e-7));
    }

    let (_, kron) = kronecker_absorption(&cov)?;
    t.residual("kronecker_form", kron, tol);

    let base = EquivariantPair::trivial(sys);
    let rank = base.rank() * sys.order();
    let xi = ModuleVector::random(sys.algebra(), rank, rng);
    let eta = ModuleVector::random(sys.algebra(), rank, rng);
    let comp = Compression::new(&base, &cov, xi.clone(), eta)?;
    t.residual("compression_structure", comp.structure_residual()?, tol);

    let reg = regular_pair_of(&base)?;
    let mut bound_violation: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let f = CcElement::random(sys, rng);
        let image = comp.apply(&reg.integrated(&f));
        bound_violation =
            bound_violation.max((image.norm() - comp.bound() * reduced_norm(&f)).max(0.0));
    }
    t.residual("compression_norm_bound", bound_violation, tol);

    let symmetric = Compression::new(&base, &cov, xi.clone(), xi.clone())?;
    let mut pos_violation: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let f = CcElement::random(sys, rng);
        let y = reg.integrated(&f.star().convolve(&f));
        let image = symmetric.apply(&y);
        let herm = (&image + &image.adjoint()).scale(num_complex::Complex64::new(0.5, 0.0));
        pos_violation = pos_violation.max((-herm.min_spectrum()).max(0.0));
    }
    t.residual("compression_positivity", pos_violation, tol);

    let identity = ModuleMap::identity(sys.algebra(), rank);
    let unit_residual =
        (&symmetric.apply(&identity) - &symmetric.predicted(&sys.algebra().one(), sys.group().identity())).norm();
    t.residual("compression_unit", unit_residual, tol);
    Ok(t)
}

fn approx_task(
    sys: &Arc<TwistedSystem>,
    tol: f64,
    samples: usize,
    rng: &mut ChaCha20Rng,
) -> Result<TaskReport> {
    let mut t = TaskReport::new("approx");

    let uniform = ScalarCertificate::uniform(sys);
    let deviations = uniform.deviations();
    t.check(
        deviations.iter().all(Ratio::is_zero),
        format!("uniform certificate deviations are not exactly zero: {deviations:?}"),
    );
    t.check(
        uniform.bound_squared() == Ratio::one(),
        format!("uniform certificate bound squared is {}", uniform.bound_squared()),
    );
    let mult = uniform.to_multiplier();
    t.residual("uniform_multiplier_deviation", mult.deviation(), tol);
    t.residual("uniform_multiplier_bound_error", (mult.bound() - 1.0).abs(), tol);
    let certificate = ApproxCertificate::new(vec![mult.clone()])?;
    t.check(
        certificate.verify(1.0 + tol, tol).accepted(),
        "uniform certificate was not accepted",
    );

    let trivial = EquivariantPair::trivial(sys);
    let xi = ModuleVector::random(sys.algebra(), sys.order(), rng);
    let eta = ModuleVector::random(sys.algebra(), sys.order(), rng);
    let generic = Multiplier::new(&trivial, xi.clone(), eta.clone())?;
    let mut reduced_bound: f64 = 0.0;
    let mut l1_domination: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let f = CcElement::random(sys, rng);
        let transformed = generic.apply_cc(&f);
        reduced_bound = reduced_bound
            .max((reduced_norm(&transformed) - generic.bound() * reduced_norm(&f)).max(0.0));
        let (defect_norm, l1_bound) = multiplier_defect_bound(&generic, &f);
        l1_domination = l1_domination.max((defect_norm - l1_bound).max(0.0));
    }
    t.residual("multiplier_reduced_bound", reduced_bound, tol);
    t.residual("defect_l1_domination", l1_domination, tol);

    let mut exel: f64 = 0.0;
    for g in sys.group().elements() {
        let a = sys.algebra().random_element(rng);
        exel = exel
            .max((&exel_t_value(sys, &xi, &eta, g, &a) - &generic.t_value(g, &a)).norm());
    }
    t.residual("exel_form_agreement", exel, tol);

    let mut last: Option<Ratio<i64>> = None;
    let mut folner_ok = true;
    for r in 1..=8i64 {
        let window = LatticeWindow::new(1, r);
        let dev = crate::approx::lattice_certificate_deviations(&window, &[vec![1]])[0];
        folner_ok &= dev == Ratio::new(1, 2 * r + 1);
        if let Some(prev) = last {
            folner_ok &= dev < prev;
        }
        last = Some(dev);
    }
    t.check(folner_ok, "lattice cutoff deviations are not exactly 1/(2r+1) and decreasing");

    match trace_embedding(sys) {
        Ok(embedding) => {
            t.count("transport_applicable", 1);
            t.residual("transported_deviation", embedding.transported_deviation(&mult), tol);
            let transported = embedding.transported_bound(&mult);
            t.residual("transported_bound_increase", (transported - mult.bound()).max(0.0), tol);
            let generic_transported = embedding.transported_bound(&generic);
            t.residual(
                "transported_bound_increase_generic",
                (generic_transported - generic.bound()).max(0.0),
                tol,
            );
        }
        Err(_) => {
            t.count("transport_applicable", 0);
        }
    }
    Ok(t)
}

/// Average a system onto its scalar subalgebra ℂ·1 through the
/// normalized trace. Valid exactly when the twist is scalar-valued;
/// otherwise ℂ·1 is not twist-closed and the validator rejects it.
pub fn trace_embedding(sys: &Arc<TwistedSystem>) -> Result<SubsystemEmbedding> {
    let algebra = sys.algebra();
    let n = sys.order();
    let mut phases = vec![vec![num_complex::Complex64::new(0.0, 0.0); n]; n];
    for g in 0..n {
        for h in 0..n {
            let s = sys.sigma(g, h);
            let phase = s.block(0)[(0, 0)];
            if (s - &algebra.scalar(phase)).norm() > 1e-12 {
                return Err(TcdsError::ShapeMismatch(format!(
                    "sigma({g},{h}) is not scalar; the scalar subalgebra is not twist-closed"
                )));
            }
            phases[g][h] = phase;
        }
    }
    let scalars = MultiMatrixAlgebra::scalars();
    let sub = TwistedSystem::scalar_cocycle(
        format!("{}-scalars", sys.name()),
        scalars.clone(),
        sys.group().clone(),
        phases,
    )?;
    let images = vec![ModuleMap::from_entries(algebra, &[vec![algebra.one()]])?];
    let embed = Representation::from_basis_images(scalars.clone(), algebra.clone(), 1, images)?;
    let expect_images =
        algebra.basis().iter().map(|b| scalars.scalar(b.normalized_trace())).collect();
    SubsystemEmbedding::new(sys.clone(), sub, embed, expect_images)
}

fn regularity_task(
    sys: &Arc<TwistedSystem>,
    tol: f64,
    samples: usize,
    rng: &mut ChaCha20Rng,
) -> Result<TaskReport> {
    let mut t = TaskReport::new("regularity");
    let pair = canonical_lambda(sys);
    let verdict = classify(&pair, rng);
    t.check(verdict.regular(), "canonical regular representation did not classify regular");
    t.check(verdict.verdicts_agree(), "kernel and expectation verdicts disagree");
    t.residual("expectation_structure", verdict.structure_residual, tol);
    t.count("kernel_dim", verdict.kernel_dim as i64);

    let rank = reduced_algebra_dim(sys)?;
    let expected = sys.order() * sys.algebra().dim();
    t.count("reduced_rank", rank as i64);
    t.check(rank == expected, format!("rank {rank} differs from |G|·dim A = {expected}"));

    // A unitary conjugate of the canonical pair must classify the same way.
    let size = pair.size();
    let codomain = pair.pi().codomain().clone();
    let u_mat = linalg::random_unitary(rng, size);
    let entries: Vec<Vec<_>> = (0..size)
        .map(|i| (0..size).map(|j| codomain.scalar(u_mat[(i, j)])).collect())
        .collect();
    let u = ModuleMap::from_entries(&codomain, &entries)?;
    let conj_pi = pair.pi().conjugate(&u)?;
    let conj_u = (0..sys.order())
        .map(|g| u.compose(pair.u(g)).compose(&u.adjoint()))
        .collect::<Vec<_>>();
    let conjugated = CovariantPair::new(sys.clone(), conj_pi, conj_u)?;
    let conj_verdict = classify(&conjugated, rng);
    t.check(conj_verdict.regular(), "unitary conjugate of the regular pair lost regularity");
    t.check(conj_verdict.verdicts_agree(), "verdicts disagree on the conjugated pair");

    // Sampled covariant representations never exceed the reduced norm.
    let mut domination: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let mult = vec![1usize; sys.algebra().num_blocks()];
        let pi = Representation::random(sys.algebra(), &mult, rng)?;
        let sampled = CovariantPair::regular_from(&pi, sys)?;
        let f = CcElement::random(sys, rng);
        domination =
            domination.max((sampled.integrated(&f).norm() - reduced_norm(&f)).max(0.0));
    }
    t.residual("full_norm_domination", domination, tol);

    let accepted = ApproxCertificate::new(vec![ScalarCertificate::uniform(sys).to_multiplier()])?
        .verify(1.0 + tol, tol)
        .accepted();
    t.count("approximation_certificate", i64::from(accepted));
    t.check(
        !accepted || verdict.regular(),
        "certificate accepted but the classifier disagrees with regularity",
    );
    Ok(t)
}
