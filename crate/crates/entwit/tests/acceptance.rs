//! Acceptance suite: one test per shipped criterion, each printing a
//! PASS/FAIL line with the measured numbers (run with `--nocapture` to see
//! them). Every tolerance is pinned here in code.
//!
//! The suite runs at desk scale: 4000 samples per family with 3600/200/200
//! splits, 2000 fresh samples per evaluation point.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use entwit::pauli::{basis_element, hs_inner, vectorize, Operator, PauliVector};
use entwit::pipeline::generate_samples;
use entwit::rng::RootSeed;
use entwit::sampling::{
    haar_unitary_2, sample_factorized, sample_haar_pure, sample_separable, FamilyTag, Orbit,
};
use entwit::state::{min_ppt_eigenvalue, validate_density, DensityOperator, PureState};
use entwit::pipeline::MARGIN_KAPPA;
use entwit::svm::{
    batch_gradient, batch_objective, calibrate_witness, evaluate, median_heuristic_gamma,
    train_kernel, train_linear, LabeledSample, Model, TrainConfig,
};
use entwit::werner::{
    invariant_projectors, sample_entangled_werner, sample_separable_werner, twirl, twirl_operator,
    werner_coeffs,
};

const BINS: usize = 75;

// Data seeds: training data, fresh evaluation data, and property checks
// stay on disjoint streams.
const SEED_TRAIN_DATA: u64 = 101;
const SEED_FRESH: u64 = 202;
const SEED_PROPS: u64 = 303;

const PER_FAMILY: usize = 4000;
const SPLIT_TRAIN: usize = 3600;
const SPLIT_VAL: usize = 200;
const SPLIT_TEST: usize = 200;
const FRESH: usize = 2000;

fn conclude(criterion: u32, pass: bool, detail: &str) {
    println!("criterion {criterion}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} failed: {detail}");
}

struct TrainedFamily {
    witness: Model,
    test_recall: f64,
    test_specificity: f64,
    train_time: Duration,
}

struct Fixture {
    sep_pool: Vec<LabeledSample>,
    e3: TrainedFamily,
    g: TrainedFamily,
}

fn split3(per_class: &[LabeledSample]) -> (&[LabeledSample], &[LabeledSample], &[LabeledSample]) {
    let train = &per_class[..SPLIT_TRAIN];
    let val = &per_class[SPLIT_TRAIN..SPLIT_TRAIN + SPLIT_VAL];
    let test = &per_class[SPLIT_TRAIN + SPLIT_VAL..SPLIT_TRAIN + SPLIT_VAL + SPLIT_TEST];
    (train, val, test)
}

fn combined(a: &[LabeledSample], b: &[LabeledSample]) -> Vec<LabeledSample> {
    a.iter().chain(b.iter()).cloned().collect()
}

fn train_family(tag: FamilyTag, seed: u64, sep_pool: &[LabeledSample]) -> TrainedFamily {
    let family_samples =
        generate_samples(tag, PER_FAMILY, Orbit::Epsilon(0.5), SEED_TRAIN_DATA).unwrap();
    let (ent_train, ent_val, ent_test) = split3(&family_samples);
    let (sep_train, sep_val, sep_test) = split3(sep_pool);

    let start = Instant::now();
    let cfg = TrainConfig { seed, ..TrainConfig::default() };
    let witness = train_linear(&combined(ent_train, sep_train), &cfg).unwrap();
    let witness =
        calibrate_witness(&witness, &combined(ent_val, sep_val), MARGIN_KAPPA).unwrap();
    let train_time = start.elapsed();

    let model = Model::Linear(witness);
    let report = evaluate(&model, &combined(ent_test, sep_test), BINS).unwrap();
    TrainedFamily {
        witness: model,
        test_recall: report.entangled_recall,
        test_specificity: report.separable_specificity,
        train_time,
    }
}

fn fixture() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let sep_pool =
            generate_samples(FamilyTag::Sep, PER_FAMILY, Orbit::Epsilon(0.5), SEED_TRAIN_DATA)
                .unwrap();
        let e3 = train_family(FamilyTag::E3, 1, &sep_pool);
        let g = train_family(FamilyTag::G, 2, &sep_pool);
        Fixture { sep_pool, e3, g }
    })
}

fn fresh_family(tag: FamilyTag, orbit: Orbit, salt: u64) -> Vec<LabeledSample> {
    generate_samples(tag, FRESH, orbit, SEED_FRESH + salt).unwrap()
}

fn recall_on(model: &Model, samples: &[LabeledSample]) -> f64 {
    evaluate(model, samples, BINS).unwrap().entangled_recall
}

fn specificity_on(model: &Model, samples: &[LabeledSample]) -> f64 {
    evaluate(model, samples, BINS).unwrap().separable_specificity
}

#[test]
fn criterion_1_in_family_linear_detection() {
    let fx = fixture();
    let mut detail = String::new();
    let mut pass = true;
    for (name, fam) in [("e3", &fx.e3), ("g", &fx.g)] {
        detail.push_str(&format!(
            "[{name}: recall {:.4} (≥0.98), specificity {:.4} (≥0.99), train {:.1}s (≤600s)] ",
            fam.test_recall,
            fam.test_specificity,
            fam.train_time.as_secs_f64()
        ));
        pass &= fam.test_recall >= 0.98
            && fam.test_specificity >= 0.99
            && fam.train_time <= Duration::from_secs(600);
    }
    conclude(1, pass, &detail);
}

#[test]
fn criterion_2_epsilon_degradation() {
    let fx = fixture();
    let mut detail = String::new();
    let mut pass = true;
    for (name, fam, tag) in
        [("e3", &fx.e3, FamilyTag::E3), ("g", &fx.g, FamilyTag::G)]
    {
        let r05 = recall_on(&fam.witness, &fresh_family(tag, Orbit::Epsilon(0.5), 1));
        let r075 = recall_on(&fam.witness, &fresh_family(tag, Orbit::Epsilon(0.75), 2));
        let r10 = recall_on(&fam.witness, &fresh_family(tag, Orbit::Epsilon(1.0), 3));
        detail.push_str(&format!("[{name}: {r05:.4} ≥ {r075:.4} ≥ {r10:.4}] "));
        pass &= r05 >= 0.95 && r10 <= 0.70 && r05 >= r075 && r075 >= r10;
    }
    conclude(2, pass, &detail);
}

#[test]
fn criterion_3_haar_worst_case() {
    let fx = fixture();
    let sep_fresh = fresh_family(FamilyTag::Sep, Orbit::Epsilon(0.5), 4);
    let mut detail = String::new();
    let mut pass = true;
    for (name, fam, tag) in
        [("e3", &fx.e3, FamilyTag::E3), ("g", &fx.g, FamilyTag::G)]
    {
        let recall = recall_on(&fam.witness, &fresh_family(tag, Orbit::Haar, 5));
        let specificity = specificity_on(&fam.witness, &sep_fresh);
        detail.push_str(&format!(
            "[{name}: haar recall {recall:.4} (≤0.05), specificity {specificity:.4} (≥0.99)] "
        ));
        pass &= recall <= 0.05 && specificity >= 0.99;
    }
    conclude(3, pass, &detail);
}

#[test]
fn criterion_4_werner_transfer_failure() {
    let fx = fixture();
    let werner_ent = fresh_family(FamilyTag::WernerEnt, Orbit::Epsilon(0.5), 6);
    let werner_sep = fresh_family(FamilyTag::WernerSep, Orbit::Epsilon(0.5), 7);
    let mut detail = String::new();
    let mut pass = true;
    for (name, fam) in [("e3", &fx.e3), ("g", &fx.g)] {
        let recall = recall_on(&fam.witness, &werner_ent);
        let specificity = specificity_on(&fam.witness, &werner_sep);
        detail.push_str(&format!(
            "[{name}: werner recall {recall:.4} (≤0.05), werner specificity {specificity:.4} (≥0.99)] "
        ));
        pass &= recall <= 0.05 && specificity >= 0.99;
    }
    conclude(4, pass, &detail);
}

#[test]
fn criterion_5_kernel_rescue() {
    let fx = fixture();
    let haar_g = generate_samples(FamilyTag::G, PER_FAMILY, Orbit::Haar, SEED_TRAIN_DATA + 1)
        .unwrap();
    let (ent_train, ent_val, ent_test) = split3(&haar_g);
    let (sep_train, sep_val, sep_test) = split3(&fx.sep_pool);
    let train_set = combined(ent_train, sep_train);
    let val_set = combined(ent_val, sep_val);
    let test_set = combined(ent_test, sep_test);

    // RBF on the Haar-scrambled generic family, width from the validation
    // (median) heuristic
    let gamma = median_heuristic_gamma(&train_set);
    let rbf = Model::Rbf(train_kernel(&train_set, gamma, 1.0).unwrap());
    let rbf_acc = evaluate(&rbf, &test_set, BINS).unwrap().accuracy;

    // linear baseline on the same task: the standard-protocol generic-family
    // witness scores at chance level here, which is what the kernel rescues
    let linear_acc = evaluate(&fx.g.witness, &test_set, BINS).unwrap().accuracy;

    // a linear model retrained directly on the scrambled data fares little
    // better; reported alongside for reference
    let cfg = TrainConfig { seed: 3, ..TrainConfig::default() };
    let retrained = train_linear(&train_set, &cfg).unwrap();
    let retrained = calibrate_witness(&retrained, &val_set, MARGIN_KAPPA).unwrap();
    let retrained_acc = evaluate(&Model::Linear(retrained), &test_set, BINS).unwrap().accuracy;

    // RBF on entangled-vs-separable Werner states
    let werner_ent =
        generate_samples(FamilyTag::WernerEnt, PER_FAMILY, Orbit::Epsilon(0.5), SEED_TRAIN_DATA + 2)
            .unwrap();
    let werner_sep =
        generate_samples(FamilyTag::WernerSep, PER_FAMILY, Orbit::Epsilon(0.5), SEED_TRAIN_DATA + 3)
            .unwrap();
    let (went_train, _went_val, went_test) = split3(&werner_ent);
    let (wsep_train, _wsep_val, wsep_test) = split3(&werner_sep);
    let wtrain = combined(went_train, wsep_train);
    let wtest = combined(went_test, wsep_test);
    let wgamma = median_heuristic_gamma(&wtrain);
    let werner_rbf = Model::Rbf(train_kernel(&wtrain, wgamma, 1.0).unwrap());
    let werner_acc = evaluate(&werner_rbf, &wtest, BINS).unwrap().accuracy;

    let pass = rbf_acc >= 0.99 && werner_acc >= 0.98 && linear_acc <= 0.60;
    conclude(
        5,
        pass,
        &format!(
            "haar-generic rbf accuracy {rbf_acc:.4} (≥0.99, γ={gamma:.3}), werner rbf accuracy \
             {werner_acc:.4} (≥0.98, γ={wgamma:.3}), linear baseline {linear_acc:.4} (≤0.60; \
             retrained on the scrambled data: {retrained_acc:.4})"
        ),
    );
}

#[test]
fn criterion_6_property_suites() {
    let mut failures = Vec::new();
    let root = RootSeed(SEED_PROPS);

    // Pauli-basis orthonormality and vectorization isometry at 1e-10
    {
        let mut rng = root.substream(1, 0);
        use rand::Rng;
        let mut worst: f64 = 0.0;
        for i in 0..256 {
            let e = basis_element(i).unwrap().matrix;
            worst = worst.max((hs_inner(&e, &e).unwrap().re - 1.0).abs());
        }
        for _ in 0..2000 {
            let i = rng.random_range(0..256);
            let j = rng.random_range(0..256);
            if i == j {
                continue;
            }
            let ei = basis_element(i).unwrap().matrix;
            let ej = basis_element(j).unwrap().matrix;
            worst = worst.max(hs_inner(&ei, &ej).unwrap().norm());
        }
        for _ in 0..50 {
            let g = Operator::from_fn(16, 16, |_, _| {
                num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let h = (&g + g.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
            let v = vectorize(&h).unwrap();
            worst = worst.max((hs_inner(&h, &h).unwrap().re - v.norm_squared()).abs());
        }
        if worst > 1e-10 {
            failures.push(format!("basis/isometry deviation {worst:.2e}"));
        }
    }

    // density validation on every sampler's outputs
    {
        let mut rng = root.substream(2, 0);
        for k in 0..50 {
            let samples: Vec<DensityOperator> = vec![
                entwit::sampling::sample_family(FamilyTag::G, 0.5, &mut rng).unwrap(),
                sample_separable(&mut rng),
                sample_factorized(&mut rng),
                sample_separable_werner(&mut rng),
                sample_entangled_werner(&mut rng).unwrap(),
                sample_haar_pure(&mut rng),
            ];
            for (s, rho) in samples.iter().enumerate() {
                if let Err(e) = validate_density(rho.matrix()) {
                    failures.push(format!("sampler {s} draw {k}: {e}"));
                }
            }
        }
    }

    // PPT necessary condition on 10^3 separable samples
    {
        let floors = entwit::par::map_indexed(1000, |i| {
            let mut rng = root.substream(3, i as u64);
            min_ppt_eigenvalue(&sample_separable(&mut rng))
        });
        let min = floors.into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            failures.push(format!("separable PPT floor {min:.2e}"));
        }
    }

    // Werner projector algebra and invariance under 100 diagonal actions
    {
        let p = invariant_projectors();
        if *p.ranks() != [9.0, 3.0, 3.0, 1.0] {
            failures.push(format!("projector ranks {:?}", p.ranks()));
        }
        let rank_dev = p
            .projectors()
            .iter()
            .zip(p.ranks())
            .map(|(q, r)| (q.trace().re - r).abs())
            .fold(0.0f64, f64::max);
        if rank_dev > 1e-10 {
            failures.push(format!("projector trace/rank deviation {rank_dev:.2e}"));
        }
        let mut sum = Operator::zeros(16, 16);
        let mut worst: f64 = 0.0;
        for (a, qa) in p.projectors().iter().enumerate() {
            sum += qa;
            for (b, qb) in p.projectors().iter().enumerate() {
                let prod = qa * qb;
                let expected =
                    if a == b { qa.clone() } else { Operator::zeros(16, 16) };
                worst = worst
                    .max((prod - expected).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst = worst.max(
            (sum - Operator::identity(16, 16)).iter().map(|z| z.norm()).fold(0.0, f64::max),
        );
        if worst > 1e-10 {
            failures.push(format!("projector algebra deviation {worst:.2e}"));
        }

        let mut rng = root.substream(4, 0);
        let mut inv_worst: f64 = 0.0;
        for _ in 0..100 {
            let u1 = haar_unitary_2(&mut rng);
            let u2 = haar_unitary_2(&mut rng);
            let u = entwit::linalg::kron4(&[u1, u2, u1, u2]);
            for q in p.projectors() {
                let comm = &u * q - q * &u;
                inv_worst = inv_worst.max(comm.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        if inv_worst > 1e-9 {
            failures.push(format!("projector invariance deviation {inv_worst:.2e}"));
        }
    }

    // twirl: idempotent, trace preserving, self-dual at 1e-10 on 100 pairs
    {
        let mut rng = root.substream(5, 0);
        use rand::Rng;
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let rho = entwit::sampling::sample_hs_mixed(&mut rng);
            let t = twirl(&rho);
            worst = worst.max((t.matrix().trace().re - 1.0).abs());
            let tt = twirl(&t);
            worst = worst
                .max((tt.matrix() - t.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max));
            let g = Operator::from_fn(16, 16, |_, _| {
                num_complex::Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let w = (&g + g.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
            let lhs = hs_inner(t.matrix(), &w).unwrap();
            let rhs = hs_inner(rho.matrix(), &twirl_operator(&w).unwrap()).unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
        if worst > 1e-10 {
            failures.push(format!("twirl deviation {worst:.2e}"));
        }
    }

    // hinge subgradient vs central finite differences, rel err ≤ 1e-5
    {
        let mut rng = root.substream(6, 0);
        use rand::Rng;
        let lambda = 0.5e-4;
        let mut checked = 0;
        while checked < 20 {
            let data: Vec<LabeledSample> = (0..8)
                .map(|k| {
                    let family = if k % 2 == 0 { FamilyTag::Sep } else { FamilyTag::E3 };
                    let mut coeffs = [0.0; 256];
                    for c in coeffs.iter_mut() {
                        *c = rng.random_range(-0.3..0.3);
                    }
                    LabeledSample::new(PauliVector::new(coeffs).unwrap(), family)
                })
                .collect();
            let mut w = [0.0; 256];
            for c in w.iter_mut() {
                *c = rng.random_range(-0.5..0.5);
            }
            let w = PauliVector::new(w).unwrap();
            if data
                .iter()
                .any(|s| (1.0 - w.dot(&s.features) * s.label.sign()).abs() < 1e-3)
            {
                continue;
            }
            checked += 1;
            let grad = batch_gradient(&w, &data, lambda).unwrap();
            let h = 1e-6;
            let mut err_sq = 0.0;
            let mut norm_sq = 0.0;
            for k in 0..256 {
                let mut plus = w.clone();
                plus.coeffs_mut()[k] += h;
                let mut minus = w.clone();
                minus.coeffs_mut()[k] -= h;
                let fd = (batch_objective(&plus, &data, lambda).unwrap()
                    - batch_objective(&minus, &data, lambda).unwrap())
                    / (2.0 * h);
                err_sq += (fd - grad[k]) * (fd - grad[k]);
                norm_sq += grad[k] * grad[k];
            }
            let rel = (err_sq / norm_sq.max(1e-24)).sqrt();
            if rel > 1e-5 {
                failures.push(format!("hinge gradient relative error {rel:.2e}"));
            }
        }
    }

    // kernel dual feasibility and KKT residual ≤ 1e-3
    {
        let went = generate_samples(FamilyTag::WernerEnt, 300, Orbit::Epsilon(0.5), SEED_PROPS)
            .unwrap();
        let wsep = generate_samples(FamilyTag::WernerSep, 300, Orbit::Epsilon(0.5), SEED_PROPS)
            .unwrap();
        let data = combined(&went, &wsep);
        let gamma = median_heuristic_gamma(&data);
        let model = train_kernel(&data, gamma, 1.0).unwrap();
        if model.kkt_residual > 1e-3 {
            failures.push(format!("KKT residual {:.2e}", model.kkt_residual));
        }
        let balance: f64 =
            model.dual_coeffs.iter().zip(model.labels.iter()).map(|(a, t)| a * t).sum();
        if balance.abs() > 1e-8 {
            failures.push(format!("dual balance {balance:.2e}"));
        }
        if model.dual_coeffs.iter().any(|&a| !(0.0..=1.0 + 1e-12).contains(&a)) {
            failures.push("dual coefficient out of the box".into());
        }
    }

    // bit-identical reruns of every seeded pipeline stage
    {
        let a = generate_samples(FamilyTag::E3, 40, Orbit::Epsilon(0.5), 9).unwrap();
        let b = generate_samples(FamilyTag::E3, 40, Orbit::Epsilon(0.5), 9).unwrap();
        let identical = a.iter().zip(b.iter()).all(|(x, y)| {
            x.features
                .coeffs()
                .iter()
                .zip(y.features.coeffs())
                .all(|(p, q)| p.to_bits() == q.to_bits())
        });
        if !identical {
            failures.push("dataset generation not bit-identical".into());
        }

        let sep = generate_samples(FamilyTag::Sep, 40, Orbit::Epsilon(0.5), 9).unwrap();
        let mix = combined(&a, &sep);
        let cfg = TrainConfig { epochs: 300, seed: 13, ..TrainConfig::default() };
        let w1 = train_linear(&mix, &cfg).unwrap();
        let w2 = train_linear(&mix, &cfg).unwrap();
        if w1
            .coefficients()
            .coeffs()
            .iter()
            .zip(w2.coefficients().coeffs())
            .any(|(p, q)| p.to_bits() != q.to_bits())
        {
            failures.push("linear training not bit-identical".into());
        }

        let k1 = train_kernel(&mix, 1.0, 1.0).unwrap();
        let k2 = train_kernel(&mix, 1.0, 1.0).unwrap();
        if k1.bias.to_bits() != k2.bias.to_bits()
            || k1
                .dual_coeffs
                .iter()
                .zip(k2.dual_coeffs.iter())
                .any(|(p, q)| p.to_bits() != q.to_bits())
        {
            failures.push("kernel training not bit-identical".into());
        }
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "orthonormality, sampler validity, PPT, projector algebra, twirl, hinge gradient, \
         dual feasibility, determinism all hold"
            .to_string()
    } else {
        failures.join("; ")
    };
    conclude(6, pass, &detail);
}

#[test]
fn criterion_7_analytic_spot_checks() {
    let mut failures = Vec::new();

    let q = werner_coeffs(&DensityOperator::maximally_mixed());
    let expected = [9.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 1.0 / 16.0];
    for (got, want) in q.q.iter().zip(expected) {
        if (got - want).abs() > 1e-9 {
            failures.push(format!("maximally mixed coeffs {:?}", q.q));
            break;
        }
    }

    // double singlet on the pairs sharing a unitary
    let s = 1.0 / 2.0f64.sqrt();
    let mut terms = Vec::new();
    for ((b1, b3), w13) in [((0usize, 1usize), s), ((1, 0), -s)] {
        for ((b2, b4), w24) in [((0usize, 1usize), s), ((1, 0), -s)] {
            let index = (b1 << 3) | (b2 << 2) | (b3 << 1) | b4;
            terms.push((index, num_complex::Complex64::new(w13 * w24, 0.0)));
        }
    }
    let singlets = PureState::from_terms(&terms).unwrap().density();
    let q = werner_coeffs(&singlets);
    let expected = [0.0, 0.0, 0.0, 1.0];
    for (got, want) in q.q.iter().zip(expected) {
        if (got - want).abs() > 1e-9 {
            failures.push(format!("double-singlet coeffs {:?}", q.q));
            break;
        }
    }
    if q.is_separable() {
        failures.push("double singlet not flagged entangled".into());
    }

    // E8 representative: exactly two populations of 1/2
    let rho = entwit::sampling::slocc_state(FamilyTag::E8, &entwit::sampling::FamilyParams::ZERO)
        .unwrap()
        .density();
    let mut populations: Vec<f64> = (0..16).map(|k| rho.matrix()[(k, k)].re).collect();
    let nonzero: Vec<f64> = populations
        .iter()
        .copied()
        .filter(|p| p.abs() > 1e-9)
        .collect();
    populations.sort_by(f64::total_cmp);
    if nonzero.len() != 2 || nonzero.iter().any(|p| (p - 0.5).abs() > 1e-9) {
        failures.push(format!("E8 populations {nonzero:?}"));
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "werner coefficients of I/16 and singlet⊗singlet, E8 populations all match".to_string()
    } else {
        failures.join("; ")
    };
    conclude(7, pass, &detail);
}
