#![allow(dead_code)]

use holo_core::holant::{GridVertex, SignatureGrid};
use holo_core::scalars::{Rational, Scalar};
use holo_core::signatures::{rational_rotation, DenseSignature, SymmetricSignature, Transform};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn small_scalar() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, -3i64..=3, prop::bool::weighted(0.2)).prop_map(|(a, b, alpha)| {
        let base = Scalar::from(a) + Scalar::from(b) * Scalar::i();
        if alpha {
            base * Scalar::alpha()
        } else {
            base
        }
    })
}

pub fn dense_signature(arity: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DenseSignature> {
    arity.prop_flat_map(|n| {
        prop::collection::vec(small_scalar(), 1 << n)
            .prop_map(|e| DenseSignature::from_entries(e).unwrap())
    })
}

pub fn symmetric_signature(arity: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = SymmetricSignature> {
    arity.prop_flat_map(|n| {
        prop::collection::vec(small_scalar(), n + 1)
            .prop_map(|v| SymmetricSignature::new(v).unwrap())
    })
}

pub fn rotation_parameter() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

pub fn rotation() -> impl Strategy<Value = Transform> {
    rotation_parameter().prop_map(|t| rational_rotation(&t))
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Transform {
    let t = rat(rng.gen_range(-4..=4), rng.gen_range(1..=4));
    rational_rotation(&t)
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Scalar {
    Scalar::i_pow(rng.gen_range(0..4))
}

pub fn assert_dense_eq(a: &DenseSignature, b: &DenseSignature) {
    assert!(a.equals(b).unwrap(), "{:?}\n!=\n{:?}", a, b);
}

/// A random member of `A`: a unit times `chi_{Ax = b}` times `i^Q` with `Q`
/// a quadratic form with even cross terms in all `n` variables. Falls back
/// to the full cube when the constraints are inconsistent.
pub fn random_affine<R: Rng>(rng: &mut R, n: usize) -> DenseSignature {
    let size = 1usize << n;
    let constraints: Vec<(usize, u32)> = (0..rng.gen_range(0..n))
        .map(|_| (rng.gen_range(0..size), rng.gen_range(0..2)))
        .collect();
    let linear: Vec<u32> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let cross: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
    let scale = random_unit(rng);
    let bit = |x: usize, j: usize| (x >> (n - 1 - j)) as u32 & 1;
    let satisfies = |x: usize| constraints.iter().all(|&(a, b)| (a & x).count_ones() % 2 == b);
    let any = (0..size).any(satisfies);
    let entries = (0..size)
        .map(|x| {
            if any && !satisfies(x) {
                return Scalar::zero();
            }
            let mut q = 0;
            for j in 0..n {
                q += linear[j] * bit(x, j);
                for k in j + 1..n {
                    q += 2 * cross[j][k] * bit(x, j) * bit(x, k);
                }
            }
            &scale * &Scalar::i_pow(q as i64)
        })
        .collect();
    DenseSignature::from_entries(entries).unwrap()
}

/// Entries of `{0, 1, i, -1, -i}` encoded as `4` for zero and `r` for `i^r`.
pub type UnitPattern = Vec<u8>;

pub fn unit_pattern(f: &DenseSignature) -> Option<UnitPattern> {
    f.entries()
        .iter()
        .map(|e| {
            if e.is_zero().unwrap() {
                Some(4)
            } else {
                e.is_power_of_i().unwrap()
            }
        })
        .collect()
}

/// Rotates every unit in a pattern so the first nonzero entry is `1`.
pub fn normalize_pattern(p: &UnitPattern) -> UnitPattern {
    let shift = p.iter().copied().find(|&e| e < 4).unwrap_or(0);
    p.iter().map(|&e| if e < 4 { (e + 4 - shift) % 4 } else { 4 }).collect()
}

/// Brute-force affine oracle: every normalized member of `A` of arity `n`
/// with unit entries, built from triple-XOR closed supports and every
/// quadratic form `c + sum c_j x_j + 2 sum c_kl x_k x_l` with all
/// coefficients in `Z_4`.
pub fn affine_patterns(n: usize) -> std::collections::HashSet<UnitPattern> {
    let size = 1usize << n;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).collect();
    let forms = 4usize.pow((1 + n + pairs.len()) as u32);
    let mut out = std::collections::HashSet::new();
    for mask in 1u64..(1u64 << size) {
        let s: Vec<usize> = (0..size).filter(|&x| mask >> x & 1 == 1).collect();
        if !triple_xor_closed(&s) {
            continue;
        }
        for code in 0..forms {
            let digit = |i: usize| ((code / 4usize.pow(i as u32)) % 4) as u32;
            let bit = |x: usize, j: usize| (x >> (n - 1 - j)) as u32 & 1;
            let pattern: UnitPattern = (0..size)
                .map(|x| {
                    if mask >> x & 1 == 0 {
                        return 4;
                    }
                    let mut q = digit(0);
                    for j in 0..n {
                        q += digit(1 + j) * bit(x, j);
                    }
                    for (idx, &(k, l)) in pairs.iter().enumerate() {
                        q += 2 * digit(1 + n + idx) * bit(x, k) * bit(x, l);
                    }
                    (q % 4) as u8
                })
                .collect();
            out.insert(normalize_pattern(&pattern));
        }
    }
    out
}

pub fn triple_xor_closed(s: &[usize]) -> bool {
    let set: std::collections::HashSet<usize> = s.iter().copied().collect();
    s.iter()
        .all(|&x| s.iter().all(|&y| s.iter().all(|&z| set.contains(&(x ^ y ^ z)))))
}

pub fn random_nonzero<R: Rng>(rng: &mut R) -> Scalar {
    let mut v = 0;
    while v == 0 {
        v = rng.gen_range(-3i64..=3);
    }
    Scalar::from(v) * random_unit(rng)
}

/// A generalized equality of arity `k` supported on a random `{x, !x}`.
pub fn random_generalized_equality<R: Rng>(rng: &mut R, k: usize) -> DenseSignature {
    if k == 1 {
        let entries = match rng.gen_range(0..3) {
            0 => vec![random_nonzero(rng), Scalar::zero()],
            1 => vec![Scalar::zero(), random_nonzero(rng)],
            _ => vec![random_nonzero(rng), random_nonzero(rng)],
        };
        return DenseSignature::from_entries(entries).unwrap();
    }
    let size = 1usize << k;
    let x = rng.gen_range(0..size);
    let mut entries = vec![Scalar::zero(); size];
    entries[x] = random_nonzero(rng);
    entries[(size - 1) ^ x] = random_nonzero(rng);
    DenseSignature::from_entries(entries).unwrap()
}

/// Variables `0..n` shuffled and cut into blocks of size at most `max_block`.
pub fn random_blocks<R: Rng>(rng: &mut R, n: usize, max_block: usize) -> Vec<Vec<usize>> {
    use rand::seq::SliceRandom;
    let mut vars: Vec<usize> = (0..n).collect();
    vars.shuffle(rng);
    let mut blocks = Vec::new();
    let mut rest = &vars[..];
    while !rest.is_empty() {
        let k = rng.gen_range(1..=max_block.min(rest.len()));
        let mut b = rest[..k].to_vec();
        b.sort_unstable();
        blocks.push(b);
        rest = &rest[k..];
    }
    blocks
}

/// Tensor product of `factors[i]` placed on `blocks[i]` (0-based variables).
pub fn place_factors(n: usize, blocks: &[Vec<usize>], factors: &[DenseSignature]) -> DenseSignature {
    let entries = (0..1usize << n)
        .map(|x| {
            let mut acc = Scalar::one();
            for (b, f) in blocks.iter().zip(factors) {
                let idx = b.iter().fold(0, |a, &v| a << 1 | (x >> (n - 1 - v) & 1));
                acc = &acc * f.entry(idx);
            }
            acc
        })
        .collect();
    DenseSignature::from_entries(entries).unwrap()
}

/// A random member of `P` on `n` variables.
pub fn random_product_type<R: Rng>(rng: &mut R, n: usize) -> DenseSignature {
    let blocks = random_blocks(rng, n, 3);
    let factors: Vec<DenseSignature> = blocks
        .iter()
        .map(|b| random_generalized_equality(rng, b.len()))
        .collect();
    place_factors(n, &blocks, &factors)
}

/// Whether `f` splits as a product across `block` and its complement, by
/// checking every `2 x 2` minor of the reshaped matrix.
pub fn separable(f: &DenseSignature, block: u32) -> bool {
    let n = f.arity();
    let mask = |x: usize| -> (usize, usize) {
        let mut r = 0;
        let mut c = 0;
        for v in 0..n {
            let b = x >> (n - 1 - v) & 1;
            if block >> v & 1 == 1 {
                r = r << 1 | b;
            } else {
                c = c << 1 | b;
            }
        }
        (r, c)
    };
    let k = block.count_ones() as usize;
    let mut m = vec![vec![Scalar::zero(); 1 << (n - k)]; 1 << k];
    for x in 0..1usize << n {
        let (r, c) = mask(x);
        m[r][c] = f.entry(x).clone();
    }
    for a in 0..m.len() {
        for a2 in a + 1..m.len() {
            for b in 0..m[0].len() {
                for b2 in b + 1..m[0].len() {
                    let d = &(&m[a][b] * &m[a2][b2]) - &(&m[a][b2] * &m[a2][b]);
                    if !d.is_zero().unwrap() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Irreducible blocks (1-based) of a nonzero signature: each variable's block
/// is the intersection of all separable variable sets containing it.
pub fn partition_oracle(f: &DenseSignature) -> Vec<Vec<usize>> {
    let n = f.arity();
    let full = (1u32 << n) - 1;
    let seps: Vec<u32> = (1..=full).filter(|&s| s == full || separable(f, s)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let cell = seps.iter().filter(|&&s| s >> v & 1 == 1).fold(full, |a, &s| a & s);
        let b: Vec<usize> = (0..n).filter(|&j| cell >> j & 1 == 1).map(|j| j + 1).collect();
        if !blocks.contains(&b) {
            blocks.push(b);
        }
    }
    blocks.sort();
    blocks
}

pub fn random_entries<R: Rng>(rng: &mut R, n: usize) -> DenseSignature {
    let entries = (0..1usize << n)
        .map(|_| Scalar::from(rng.gen_range(-2i64..=2)) + Scalar::from(rng.gen_range(-1i64..=1)) * Scalar::i())
        .collect();
    DenseSignature::new(n, entries).unwrap()
}

pub const MAX_DEGREE: usize = 6;

/// A random multigraph with up to `max_edges` edges (self-loops allowed) and
/// a random signature at every vertex of positive degree.
pub fn random_grid<R: Rng>(rng: &mut R, max_edges: usize) -> SignatureGrid {
    let v = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=max_edges);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); v];
    for e in 0..m {
        let (a, b) = loop {
            let (a, b) = (rng.gen_range(0..v), rng.gen_range(0..v));
            let room = |x: usize, k: usize| incident[x].len() + k <= MAX_DEGREE;
            if (a == b && room(a, 2)) || (a != b && room(a, 1) && room(b, 1)) {
                break (a, b);
            }
            if (0..v).all(|x| !room(x, 1)) {
                return random_grid(rng, e.max(1));
            }
        };
        incident[a].push(e);
        incident[b].push(e);
    }
    for list in incident.iter_mut() {
        list.shuffle(rng);
    }
    let vertices = incident
        .into_iter()
        .filter(|l| !l.is_empty())
        .map(|incident| GridVertex {
            signature: random_entries(rng, incident.len()),
            incident,
        })
        .collect();
    SignatureGrid {
        edges: m,
        vertices,
        bipartite: None,
    }
}

pub fn random_orthogonal<R: Rng>(rng: &mut R) -> Transform {
    let h = random_rotation(rng);
    if rng.gen_bool(0.5) {
        h.mul(&Transform::from_ints(1, 0, 0, -1))
    } else {
        h
    }
}
