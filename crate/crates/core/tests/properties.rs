use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitforge::abelian::{
    det_automorphism, exact_sequence_factor, quotient, series_value, standard_series, AbelianGroup, Element, Hom,
    Pairing, Presentation, Subgroup,
};
use orbitforge::catalog;
use orbitforge::modular::{det_mod_p, inv_mod, mul_mod};
use orbitforge::polar::{enumerate_lagrangians, enumerate_polarizations, relative_orientation, OrientedPolarization};
use orbitforge::rep::RootSum;
use orbitforge::scalars::Cyclotomic;
use orbitforge::session::Session;
use orbitforge::suites::{maslov_tuple_check, oriented_tuples};
use orbitforge::witt::QuadraticModule;

fn shape() -> impl Strategy<Value = (u64, Vec<u32>)> {
    (prop::sample::select(vec![3u64, 5]), prop::collection::vec(1u32..=2, 1..=3)).prop_map(|(p, mut e)| {
        e.sort_unstable_by(|a, b| b.cmp(a));
        while e.iter().sum::<u32>() > 4 {
            e.pop();
        }
        (p, e)
    })
}

fn random_element(rng: &mut ChaCha8Rng, a: &AbelianGroup) -> Element {
    (0..a.rank()).map(|i| rng.gen_range(0..a.modulus(i))).collect()
}

fn random_subgroup(rng: &mut ChaCha8Rng, a: &AbelianGroup) -> Subgroup {
    let k = rng.gen_range(0..=a.rank());
    let gens: Vec<Element> = (0..k).map(|_| random_element(rng, a)).collect();
    Subgroup::from_generators(a, &gens)
}

fn random_automorphism(rng: &mut ChaCha8Rng, a: &AbelianGroup) -> Hom {
    let images = Presentation::standard(a).random_basis(rng);
    Hom::new(a, a, images).unwrap()
}

fn inverse(phi: &Hom) -> Hom {
    let a = phi.src();
    let images = (0..a.rank()).map(|i| phi.solve(&a.basis_vector(i)).unwrap()).collect();
    Hom::new(a, a, images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_ring_laws(p in prop::sample::select(vec![3u64, 5, 7]), xs in prop::collection::vec((0u64..60, -3i128..4), 1..6),
                            ys in prop::collection::vec((0u64..60, -3i128..4), 1..6), zs in prop::collection::vec((0u64..60, -3i128..4), 1..6)) {
        let s = Session::new(p, 1).unwrap();
        let f = s.field();
        let n = s.conductor();
        let mk = |v: &[(u64, i128)]| Cyclotomic::root_sum(f, &v.iter().map(|&(k, c)| (k % n, c)).collect::<Vec<_>>());
        let (x, y, z) = (mk(&xs), mk(&ys), mk(&zs));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!(&x - &x, s.zero());
        let (a, b) = (&x * &y).to_complex();
        let (xr, xi) = x.to_complex();
        let (yr, yi) = y.to_complex();
        prop_assert!((a - (xr * yr - xi * yi)).abs() < 1e-6 && (b - (xr * yi + xi * yr)).abs() < 1e-6);
    }

    #[test]
    fn root_sums_ignore_fiber_relations(p in prop::sample::select(vec![3u64, 5]), e in 1u32..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = p.pow(e) as usize;
        let counts: Vec<i64> = (0..q).map(|_| rng.gen_range(-3..4)).collect();
        let mut shifted = counts.clone();
        let b = q / p as usize;
        let j = rng.gen_range(0..b);
        let k = rng.gen_range(-5..6);
        for t in 0..p as usize {
            shifted[j + t * b] += k;
        }
        let s = Session::new(p, e).unwrap();
        let x = RootSum::new(p, 1, counts);
        let y = RootSum::new(p, 1, shifted);
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(x.to_cyclotomic(&s), y.to_cyclotomic(&s));
        prop_assert_eq!(x.is_zero(), x.to_cyclotomic(&s).is_zero());
    }

    #[test]
    fn subgroup_lattice_is_modular((p, e) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AbelianGroup::new(p, e).unwrap();
        let s = random_subgroup(&mut rng, &a);
        let t = random_subgroup(&mut rng, &a);
        let u = random_subgroup(&mut rng, &a);
        let sum = s.sum(&t).unwrap();
        let meet = s.intersect(&t).unwrap();
        prop_assert_eq!(sum.len() + meet.len(), s.len() + t.len());
        prop_assert!(meet.is_subgroup_of(&s) && s.is_subgroup_of(&sum));
        // modular law: S ⊆ U ⟹ S + (T ∩ U) = (S + T) ∩ U
        let su = s.intersect(&u).unwrap();
        let left = su.sum(&t.intersect(&u).unwrap()).unwrap();
        let right = su.sum(&t).unwrap().intersect(&u).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn perp_is_an_involution((p, e) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let doubled: Vec<u32> = e.iter().flat_map(|&x| [x, x]).take(4).collect();
        let a = AbelianGroup::new(p, doubled).unwrap();
        let w = Pairing::hyperbolic(&a).unwrap();
        let s = random_subgroup(&mut rng, &a);
        let sp = w.perp(&s).unwrap();
        prop_assert_eq!(s.len() + sp.len(), a.len());
        prop_assert_eq!(w.perp(&sp).unwrap(), s);
    }

    #[test]
    fn determinant_of_automorphisms_is_multiplicative((p, e) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AbelianGroup::new(p, e).unwrap();
        let phi = random_automorphism(&mut rng, &a);
        let psi = random_automorphism(&mut rng, &a);
        let d = det_automorphism(&phi.compose(&psi).unwrap()).unwrap();
        prop_assert_eq!(d, mul_mod(det_automorphism(&phi).unwrap(), det_automorphism(&psi).unwrap(), p));
        prop_assert_eq!(det_automorphism(&Hom::identity(&a)).unwrap(), 1);
    }

    #[test]
    fn series_value_is_multilinear((p, e) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AbelianGroup::new(p, e).unwrap();
        let phi = random_automorphism(&mut rng, &a);
        let series: Vec<Element> = standard_series(&a).iter().map(|x| phi.apply(x)).collect();
        let v = series_value(&a, &series).unwrap();
        // rescaling one step by a unit scales the value by that unit
        let i = rng.gen_range(0..series.len());
        let u = rng.gen_range(1..p);
        let mut scaled = series.clone();
        scaled[i] = a.scale(u, &series[i]);
        prop_assert_eq!(series_value(&a, &scaled).unwrap(), mul_mod(v, u, p));
        // changing a step by an element of the previous term changes nothing
        let prev = Subgroup::from_generators(&a, &series[..i]);
        let mut shifted = series.clone();
        let c = rng.gen_range(0..a.order()) ;
        let extra = prev.generators().first().map(|g| a.scale(c, g)).unwrap_or_else(|| a.zero());
        shifted[i] = a.add(&series[i], &extra);
        prop_assert_eq!(series_value(&a, &shifted).unwrap(), v);
        // the determinant of φ is the ratio of the values of φ(std) and std
        let base = series_value(&a, &standard_series(&a)).unwrap();
        prop_assert_eq!(v, mul_mod(base, det_automorphism(&phi).unwrap(), p));
    }

    #[test]
    fn series_value_on_vector_spaces_is_the_determinant(p in prop::sample::select(vec![3u64, 5, 7]), n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AbelianGroup::new(p, vec![1; n]).unwrap();
        let rows: Vec<Element> = Presentation::standard(&a).random_basis(&mut rng);
        prop_assert_eq!(series_value(&a, &rows).unwrap(), det_mod_p(rows.clone(), p));
    }

    #[test]
    fn exact_sequence_factor_is_natural((p, e) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AbelianGroup::new(p, e).unwrap();
        let k = random_subgroup(&mut rng, &a);
        let pres = Presentation::canonical(&k);
        let q = quotient(&a, &k).unwrap();
        let lam = exact_sequence_factor(pres.inclusion(), &q.projection).unwrap();
        // precomposing the inclusion with α ∈ Aut K divides λ by det α
        let alpha = random_automorphism(&mut rng, pres.group());
        let inc2 = pres.inclusion().compose(&alpha).unwrap();
        let lam2 = exact_sequence_factor(&inc2, &q.projection).unwrap();
        prop_assert_eq!(mul_mod(lam2, det_automorphism(&alpha).unwrap(), p), lam);
        // postcomposing the projection with β ∈ Aut Q lifts β^{-1}(std Q), multiplying λ by det β
        let beta = random_automorphism(&mut rng, &q.group);
        let proj2 = beta.compose(&q.projection).unwrap();
        let lam3 = exact_sequence_factor(pres.inclusion(), &proj2).unwrap();
        prop_assert_eq!(lam3, mul_mod(lam, det_automorphism(&beta).unwrap(), p));
        // transporting along γ ∈ Aut A moves the lifted series by γ, dividing λ by det γ
        let gamma = random_automorphism(&mut rng, &a);
        let inc4 = gamma.compose(pres.inclusion()).unwrap();
        let proj4 = q.projection.compose(&inverse(&gamma)).unwrap();
        let lam4 = exact_sequence_factor(&inc4, &proj4).unwrap();
        prop_assert_eq!(mul_mod(lam4, det_automorphism(&gamma).unwrap(), p), lam);
    }

    #[test]
    fn witt_classes_and_gamma_are_multiplicative(p in prop::sample::select(vec![3u64, 5]), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shapes: [&[u32]; 4] = [&[1], &[2], &[1, 1], &[2, 1]];
        let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let q1 = QuadraticModule::random(&mut rng, p, shapes[i]).unwrap();
        let q2 = QuadraticModule::random(&mut rng, p, shapes[j]).unwrap();
        let sum = q1.orthogonal_sum(&q2).unwrap();
        let (c1, c2) = (q1.witt_class(1).unwrap(), q2.witt_class(1).unwrap());
        prop_assert_eq!(sum.witt_class(1).unwrap(), c1.mul(&c2));
        prop_assert!(q1.orthogonal_sum(&q1.opposite()).unwrap().witt_class(1).unwrap().is_identity());
        let s = Session::new(p, 2).unwrap();
        prop_assert_eq!(sum.gamma(&s).unwrap(), &q1.gamma(&s).unwrap() * &q2.gamma(&s).unwrap());
    }

    #[test]
    fn campbell_hausdorff_group_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, _) = catalog::ut4(5);
        let a = r.carrier().clone();
        let (x, y, z) = (random_element(&mut rng, &a), random_element(&mut rng, &a), random_element(&mut rng, &a));
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(&x, &r.inverse(&x)), r.identity());
        prop_assert_eq!(r.mul(&x, &a.scale(2, &x)), a.scale(3, &x));
        let (h, _) = catalog::heisenberg_mixed();
        let b = h.carrier().clone();
        let (u, v) = (random_element(&mut rng, &b), random_element(&mut rng, &b));
        let half = inv_mod(2, 27).unwrap();
        prop_assert_eq!(h.mul(&u, &v), b.add(&b.add(&u, &v), &b.scale(half, &h.bracket(&u, &v))));
    }

    #[test]
    fn maslov_identities_hold(seed in any::<u64>(), big in any::<bool>()) {
        let exps = if big { vec![2, 2] } else { vec![1, 1, 1, 1] };
        let a = AbelianGroup::new(3, exps).unwrap();
        let w = Pairing::hyperbolic(&a).unwrap();
        let lags = enumerate_lagrangians(&w).unwrap();
        for t in oriented_tuples(&w, &lags, seed, 2) {
            let rec = maslov_tuple_check(&w, &t, 1).unwrap();
            prop_assert_eq!(&rec["ok"], &serde_json::Value::Bool(true), "{}", rec);
        }
    }

    #[test]
    fn relative_orientation_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, f) = catalog::ut4(5);
        let pols = enumerate_polarizations(&r, &f).unwrap();
        let o1 = OrientedPolarization::new(pols[rng.gen_range(0..pols.len())].clone(), rng.gen_range(1..5));
        let o2 = OrientedPolarization::new(pols[rng.gen_range(0..pols.len())].clone(), rng.gen_range(1..5));
        let c = rng.gen_range(1..5);
        let t = relative_orientation(&r, &f, &o1, &o2, 1).unwrap();
        prop_assert_eq!(relative_orientation(&r, &f, &o1.rescaled(c), &o2, 1).unwrap(), mul_mod(t, c, 5));
        prop_assert_eq!(relative_orientation(&r, &f, &o1, &o2.rescaled(c), 1).unwrap(), mul_mod(t, c, 5));
        let o3 = o1.represented_by(o1.presentation.random_basis(&mut rng)).unwrap();
        prop_assert_eq!(relative_orientation(&r, &f, &o3, &o2, 1).unwrap(), t);
    }
}
