use std::sync::Arc;

use proptest::prelude::*;
use ramify_core::algebra::{FiniteField, LaurentSeries, MatrixFF, EXACT};
use ramify_core::group::FiniteGroup;
use ramify_core::ramification::{
    break_decomposition, integer_point_sum, swan_by_filtration, swan_conductor, Herbrand,
    RamFiltration, Representation, Q,
};

const FIELDS: [(u64, u32); 7] = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2)];

fn field_strategy() -> impl Strategy<Value = Arc<FiniteField>> {
    (0..FIELDS.len()).prop_map(|i| FiniteField::new(FIELDS[i].0, FIELDS[i].1).unwrap())
}

/// Schoolbook product of coordinate vectors reduced by the monic modulus.
fn naive_mul(k: &FiniteField, x: u32, y: u32) -> u32 {
    let p = k.characteristic() as u64;
    let a = k.degree() as usize;
    let (dx, dy) = (k.digits(x), k.digits(y));
    let mut prod = vec![0u64; 2 * a];
    for i in 0..a {
        for j in 0..a {
            prod[i + j] = (prod[i + j] + dx[i] as u64 * dy[j] as u64) % p;
        }
    }
    let m = k.modulus();
    for top in (a..2 * a).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - a + i;
            prod[idx] = (prod[idx] + (p - c) * mi as u64 % p) % p;
        }
    }
    let digits: Vec<u32> = prod[..a].iter().map(|&c| c as u32).collect();
    k.from_digits(&digits).unwrap()
}

proptest! {
    #[test]
    fn field_matches_naive_arithmetic(k in field_strategy(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let q = k.order();
        let (x, y, z) = (x % q, y % q, z % q);
        prop_assert_eq!(k.mul(x, y), naive_mul(&k, x, y));
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        prop_assert_eq!(k.sub(k.add(x, y), y), x);
        if x != 0 {
            prop_assert_eq!(k.mul(x, k.inv(x).unwrap()), 1);
        }
        let p = k.characteristic() as i64;
        prop_assert_eq!(k.pow(k.add(x, y), p).unwrap(), k.add(k.pow(x, p).unwrap(), k.pow(y, p).unwrap()));
        prop_assert_eq!(k.pow(k.pth_root(x), p).unwrap(), x);
    }

    #[test]
    fn series_ring_laws(k in field_strategy(), a in prop::collection::vec(any::<u32>(), 1..8), b in prop::collection::vec(any::<u32>(), 1..8), sa in -3i64..3, sb in -3i64..3) {
        let q = k.order();
        let mut a: Vec<u32> = a.into_iter().map(|c| c % q).collect();
        let mut b: Vec<u32> = b.into_iter().map(|c| c % q).collect();
        a[0] = a[0].max(1);
        b[0] = b[0].max(1);
        let x = LaurentSeries::exact(&k, sa, a);
        let y = LaurentSeries::exact(&k, sb, b);
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.valuation().unwrap(), sa + sb);
        prop_assert!(xy.sub(&y.mul(&x).unwrap()).unwrap().is_zero_to_precision());
        let back = xy.mul(&y.truncate(sb + 40).inv().unwrap()).unwrap();
        prop_assert!(back.sub(&x).unwrap().is_zero_to_precision());
        prop_assert!(back.absolute_precision() != EXACT);
    }
}

/// Cyclic group of order `m · p^k` with `G_1` the `p`-part and a random
/// non-increasing chain of `p`-power subgroups below it.
fn cyclic_filtration(p: u64, m: usize, k: u32, drops: &[u8]) -> RamFiltration {
    let pk = p.pow(k) as usize;
    let n = m * pk;
    let g = FiniteGroup::cyclic(n);
    let of_order = |d: usize| -> Vec<usize> { (0..d).map(|i| i * (n / d)).collect() };
    let mut subgroups = vec![of_order(n)];
    let mut order = pk;
    for &d in drops {
        subgroups.push(of_order(order));
        if d == 0 && order > 1 {
            order /= p as usize;
        }
    }
    subgroups.push(of_order(order));
    subgroups.push(vec![0]);
    RamFiltration::from_subgroups(g, p, subgroups).unwrap()
}

fn filtration_strategy() -> impl Strategy<Value = RamFiltration> {
    (
        prop::sample::select(vec![(2u64, 1usize), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)]),
        0u32..3,
        prop::collection::vec(0u8..3, 0..6),
    )
        .prop_map(|((p, m), k, drops)| cyclic_filtration(p, m, k, &drops))
}

/// A prime `ℓ ≠ p` with `n | ℓ - 1`.
fn coefficient_prime(n: u64, p: u64) -> u64 {
    (2..)
        .find(|&l: &u64| {
            l != p && (l - 1) % n == 0 && (2..l).take_while(|d| d * d <= l).all(|d| l % d != 0)
        })
        .unwrap()
}

fn characters(filt: &RamFiltration, powers: &[u64]) -> (Representation, Vec<Representation>) {
    let g = filt.group().clone();
    let n = g.order() as u64;
    let ell = coefficient_prime(n, filt.residue_characteristic());
    let k = FiniteField::new(ell, 1).unwrap();
    let zeta = k.root_of_unity(n).unwrap();
    let chars: Vec<Representation> = powers
        .iter()
        .map(|&e| {
            let m = MatrixFF::diagonal(&k, &[k.pow(zeta, (e % n) as i64).unwrap()]);
            Representation::from_generator_images(g.clone(), &k, 1, &[(1 % g.order(), m)]).unwrap()
        })
        .collect();
    let sum = chars[1..]
        .iter()
        .fold(chars[0].clone(), |acc, c| acc.direct_sum(c).unwrap());
    (sum, chars)
}

/// Upper break of a character: `φ(i)` for the last `i >= 1` on which it is
/// nontrivial.
fn character_swan(chi: &Representation, filt: &RamFiltration, phi: &Herbrand) -> Q {
    (1..=filt.i_max())
        .rev()
        .find(|&i| filt.g(i).iter().any(|&x| !chi.image(x).is_identity()))
        .map_or(Q::from_integer(0), |i| phi.eval(Q::from_integer(i)))
}

proptest! {
    #[test]
    fn herbrand_is_concave_increasing_and_invertible(filt in filtration_strategy(), num in 0i64..200, den in 1i64..7) {
        let phi = Herbrand::phi(&filt);
        phi.check_shape().unwrap();
        prop_assert_eq!(phi.eval(Q::from_integer(0)), Q::from_integer(0));
        let slopes = phi.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(slopes.iter().all(|&s| s > Q::from_integer(0) && s <= Q::from_integer(1)));
        let psi = phi.inverse();
        let u = Q::new(num, den) - Q::from_integer(3);
        prop_assert_eq!(psi.eval(phi.eval(u)), u);
        prop_assert_eq!(phi.eval(psi.eval(u)), u);
        for v in 1..=filt.i_max() + 2 {
            prop_assert_eq!(phi.eval(Q::from_integer(v)), integer_point_sum(&filt, v));
        }
    }

    #[test]
    fn swan_is_additive_and_matches_characters(filt in filtration_strategy(), powers in prop::collection::vec(0u64..1000, 1..4)) {
        let phi = Herbrand::phi(&filt);
        let (sum, chars) = characters(&filt, &powers);
        let report = swan_conductor(&sum, &filt).unwrap();
        let expected: Q = chars.iter().map(|c| character_swan(c, &filt, &phi)).sum();
        prop_assert_eq!(report.swan, expected);
        prop_assert_eq!(swan_by_filtration(&sum, &filt).unwrap(), expected);
        let from_breaks: Q = break_decomposition(&sum, &filt)
            .unwrap()
            .iter()
            .map(|&(l, m)| l * Q::from_integer(m as i64))
            .sum();
        prop_assert_eq!(from_breaks, expected);
        let mults: u64 = report.breaks.iter().map(|b| b.1).sum();
        prop_assert_eq!(mults, powers.len() as u64);
    }
}
