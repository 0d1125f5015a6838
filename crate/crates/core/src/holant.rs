//! Signature grids, brute-force Holant evaluation and holographic
//! transformation of grids, plus the worked example problems as fixtures.
//!
//! `Holant = sum over sigma: E -> {0,1} of prod_v f_v(sigma|E(v))`. Edge `0`
//! is the least significant bit of the assignment counter; the first
//! incident edge of a vertex is its first variable, i.e. the most
//! significant bit of the entry index.

use crate::affine::QuadraticForm;
use crate::scalars::{parse_radical, parse_scalar_with, Radical, Scalar, ScalarError};
use crate::signatures::{
    apply_transform, apply_transform_row, from_signature_matrix, DenseSignature, SymmetricSignature, Transform,
};
use rayon::prelude::*;
use std::sync::Arc;

pub const DEFAULT_MAX_EDGES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HolantError {
    #[error("grid has {edges} edges; the brute-force limit is {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("transformation is not orthogonal; general grids need an orthogonal matrix")]
    NotOrthogonal,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug)]
pub struct GridVertex {
    pub signature: DenseSignature,
    /// Edge identifiers in variable order.
    pub incident: Vec<usize>,
}

/// Vertex indices of the two sides of a bipartite grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SignatureGrid {
    pub edges: usize,
    pub vertices: Vec<GridVertex>,
    pub bipartite: Option<Bipartition>,
}

#[derive(Clone, Debug)]
pub struct HolantValue {
    pub value: Scalar,
}

impl SignatureGrid {
    /// Checks that every edge fills exactly two slots, that arities match
    /// and that a bipartition, if given, splits every edge across it.
    pub fn validate(&self) -> Result<(), HolantError> {
        let bad = |m: String| Err(HolantError::InvalidGrid(m));
        let mut slots = vec![Vec::new(); self.edges];
        for (v, vertex) in self.vertices.iter().enumerate() {
            if vertex.incident.len() != vertex.signature.arity() {
                return bad(format!(
                    "vertex {v} has {} incident edges but a signature of arity {}",
                    vertex.incident.len(),
                    vertex.signature.arity()
                ));
            }
            for &e in &vertex.incident {
                if e >= self.edges {
                    return bad(format!("vertex {v} names edge {e} of {}", self.edges));
                }
                slots[e].push(v);
            }
        }
        for (e, s) in slots.iter().enumerate() {
            if s.len() != 2 {
                return bad(format!("edge {e} occupies {} slots instead of 2", s.len()));
            }
        }
        if let Some(b) = &self.bipartite {
            let mut side = vec![None; self.vertices.len()];
            for (list, tag) in [(&b.left, 0), (&b.right, 1)] {
                for &v in list {
                    if v >= self.vertices.len() || side[v].is_some() {
                        return bad(format!("vertex {v} is misplaced in the bipartition"));
                    }
                    side[v] = Some(tag);
                }
            }
            if side.iter().any(Option::is_none) {
                return bad("the bipartition misses a vertex".into());
            }
            for (e, s) in slots.iter().enumerate() {
                if side[s[0]] == side[s[1]] {
                    return bad(format!("edge {e} does not cross the bipartition"));
                }
            }
        }
        Ok(())
    }
}

/// Exact Holant value with the default edge limit.
pub fn eval_holant(grid: &SignatureGrid) -> Result<HolantValue, HolantError> {
    eval_holant_with_limit(grid, DEFAULT_MAX_EDGES)
}

/// Number of high assignment bits split across worker tasks.
const SPLIT_BITS: usize = 6;

pub fn eval_holant_with_limit(grid: &SignatureGrid, max_edges: usize) -> Result<HolantValue, HolantError> {
    grid.validate()?;
    let m = grid.edges;
    if m > max_edges {
        return Err(HolantError::TooManyEdges { edges: m, limit: max_edges });
    }
    let split = SPLIT_BITS.min(m);
    let low = m - split;
    // partial sums are added in chunk order, so the result does not depend
    // on scheduling
    let partials: Vec<Scalar> = (0..1usize << split)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = Scalar::zero();
            for rest in 0..1usize << low {
                let sigma = chunk << low | rest;
                if let Some(term) = assignment_weight(grid, sigma) {
                    acc = &acc + &term;
                }
            }
            acc
        })
        .collect();
    let value = partials.iter().fold(Scalar::zero(), |a, b| &a + b);
    Ok(HolantValue { value })
}

/// Product of vertex values under `sigma`; `None` when a factor is exactly
/// zero.
fn assignment_weight(grid: &SignatureGrid, sigma: usize) -> Option<Scalar> {
    let mut acc: Option<Scalar> = None;
    for v in &grid.vertices {
        let idx = v.incident.iter().fold(0usize, |a, &e| a << 1 | (sigma >> e & 1));
        let x = v.signature.entry(idx);
        if x.is_zero_exact() {
            return None;
        }
        acc = Some(match acc {
            None => x.clone(),
            Some(a) => &a * x,
        });
    }
    Some(acc.unwrap_or_else(Scalar::one))
}

/// The grid with every signature transformed: `T^{(x) n} f` everywhere on a
/// general grid (`T` must be orthogonal), or `f T^{(x) n}` on the left and
/// `(T^-1)^{(x) n} g` on the right of a bipartite grid.
pub fn transform_grid(grid: &SignatureGrid, t: &Transform) -> Result<SignatureGrid, HolantError> {
    grid.validate()?;
    let mut out = grid.clone();
    match &grid.bipartite {
        None => {
            let orthogonal = t.is_orthogonal().map_err(ScalarError::from)?;
            if !orthogonal {
                return Err(HolantError::NotOrthogonal);
            }
            for v in &mut out.vertices {
                v.signature = apply_transform(t, &v.signature);
            }
        }
        Some(b) => {
            let inv = t.inverse()?;
            for &i in &b.left {
                out.vertices[i].signature = apply_transform_row(&grid.vertices[i].signature, t);
            }
            for &i in &b.right {
                out.vertices[i].signature = apply_transform(&inv, &grid.vertices[i].signature);
            }
        }
    }
    Ok(out)
}

/// Replaces every edge `e` by a path through a new binary equality vertex:
/// the first slot of `e` gets edge `2e`, the second `2e + 1`. The equality
/// vertices form the left side, the original vertices the right side.
pub fn two_stretch(grid: &SignatureGrid) -> Result<SignatureGrid, HolantError> {
    stretch_with(grid, &DenseSignature::from_ints(&[1, 0, 0, 1]))
}

/// `two_stretch` with `binary` in place of the equality.
pub fn stretch_with(grid: &SignatureGrid, binary: &DenseSignature) -> Result<SignatureGrid, HolantError> {
    grid.validate()?;
    if binary.arity() != 2 {
        return Err(HolantError::InvalidGrid("edge signature must be binary".into()));
    }
    let mut seen = vec![false; grid.edges];
    let mut vertices: Vec<GridVertex> = (0..grid.edges)
        .map(|e| GridVertex {
            signature: binary.clone(),
            incident: vec![2 * e, 2 * e + 1],
        })
        .collect();
    for v in &grid.vertices {
        let incident = v
            .incident
            .iter()
            .map(|&e| {
                let second = seen[e];
                seen[e] = true;
                2 * e + second as usize
            })
            .collect();
        vertices.push(GridVertex {
            signature: v.signature.clone(),
            incident,
        });
    }
    let left = (0..grid.edges).collect();
    let right = (grid.edges..vertices.len()).collect();
    Ok(SignatureGrid {
        edges: 2 * grid.edges,
        vertices,
        bipartite: Some(Bipartition { left, right }),
    })
}

/// A grid on a multigraph with one signature at every vertex; `edges` lists
/// the endpoints of each edge and slot order follows edge order.
pub fn regular_grid(vertex_count: usize, edges: &[(usize, usize)], signature: &DenseSignature) -> SignatureGrid {
    let mut incident = vec![Vec::new(); vertex_count];
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    SignatureGrid {
        edges: edges.len(),
        vertices: incident
            .into_iter()
            .map(|incident| GridVertex {
                signature: signature.clone(),
                incident,
            })
            .collect(),
        bipartite: None,
    }
}

/// The complete graph `K4` with Exact-One `[0,1,0,0]` at every vertex.
pub fn k4_exact_one() -> SignatureGrid {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let exact_one = crate::signatures::expand(&SymmetricSignature::from_ints(&[0, 1, 0, 0]));
    regular_grid(4, &edges, &exact_one)
}

/// The source/sink/saddle weight of a degree-4 vertex: `lambda` on `0000`
/// and `1111`, `1` on `0101` and `1010`, zero elsewhere.
pub fn orientation_signature(lambda: &Scalar) -> DenseSignature {
    let mut entries = vec![Scalar::zero(); 16];
    entries[0b0000] = lambda.clone();
    entries[0b1111] = lambda.clone();
    entries[0b0101] = Scalar::one();
    entries[0b1010] = Scalar::one();
    DenseSignature::new(4, entries).expect("arity 4")
}

#[derive(Clone, Debug)]
pub enum FixtureValue {
    Signature(DenseSignature),
    Symmetric(SymmetricSignature),
    Matrix(Box<[[Scalar; 4]; 4]>),
    Transform(Transform),
    Scalar(Scalar),
    Form(QuadraticForm),
    Grid(SignatureGrid),
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub value: FixtureValue,
    pub note: &'static str,
}

/// `y` with `y^2 = 2 (1 + sqrt 2)`, the positive root.
pub fn enigmatic_radical() -> Arc<Radical> {
    parse_radical("y^2 = 2 + 2*(a - a^3)", 0).expect("fixed declaration")
}

fn lit(src: &str, r: &Arc<Radical>) -> Scalar {
    parse_scalar_with(src, Some(Arc::clone(r))).expect("fixed literal")
}

/// `f` of the enigmatic problem; its nested radicals are rewritten over
/// `y`, e.g. `sqrt(2 (799 + 565 sqrt 2)) = (13 + 9 sqrt 2) y`.
pub fn enigmatic_f() -> DenseSignature {
    let r = enigmatic_radical();
    let s2 = "(a - a^3)";
    let p = |src: String| lit(&src, &r);
    let a = p(format!("(4 + 4*i)*(28 + 20*{s2} + (13 + 9*{s2})*y)"));
    let b = p(format!("-8*i*(13 + 9*{s2} + (6 + 4*{s2})*y)"));
    let c = p(format!("8*i*(18 + 13*{s2} + (8 + 6*{s2})*y)"));
    let d = p(format!("(-4 + 4*i)*(12 + 8*{s2} + (5 + 4*{s2})*y)"));
    let e = p(format!("-16*(13 + 9*{s2} + (6 + 4*{s2})*y)"));
    let z = Scalar::zero;
    let m = [
        [z(), a.clone(), a.clone(), b.clone()],
        [a.clone(), b.clone(), c.clone(), d.clone()],
        [a, c, b.clone(), d.clone()],
        [b, d.clone(), d, e],
    ];
    from_signature_matrix(&m)
}

/// `c = 1 + sqrt 2 + sqrt(2 (1 + sqrt 2))`.
pub fn enigmatic_c() -> Scalar {
    lit("1 + (a - a^3) + y", &enigmatic_radical())
}

/// `T = D_alpha [[1, c], [-c, 1]]`.
pub fn enigmatic_transform() -> Transform {
    let c = enigmatic_c();
    Transform::d_alpha().mul(&Transform::new(Scalar::one(), c.clone(), -c, Scalar::one()))
}

/// `Q = 2 (x1^2 + x2^2 + x3^2 + x4^2 + x1 x2 + x2 x3 + x3 x4 + x4 x1)`,
/// variable `k` of the form standing for `x_(k+1)`.
pub fn enigmatic_q() -> QuadraticForm {
    let mut q = QuadraticForm::zero(4);
    q.linear = vec![2; 4];
    for (k, l) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
        q.cross[k][l] = 1;
    }
    q
}

fn int_matrix(rows: [[i64; 4]; 4]) -> [[Scalar; 4]; 4] {
    rows.map(|r| r.map(Scalar::from))
}

/// `Z = [[1, 1], [i, -i]] / sqrt 2`.
pub fn z() -> Transform {
    Transform::z()
}

/// The worked examples: Fibonacci-like `g`, `h`, `hat_h`; the cycle-cover
/// signatures and matrices; the orientation constraints; the enigmatic
/// problem.
pub fn fixtures() -> Vec<Fixture> {
    use FixtureValue as V;
    let g = SymmetricSignature::from_ints(&[3, 1, 3, 1]);
    let h = DenseSignature::from_ints(&[3, 1, -1, -3, -1, -3, 3, 1]);
    let two_i = &Scalar::from(2) * &Scalar::i();
    let hat_h = DenseSignature::from_entries(
        [0.into(), 1.into(), 0.into(), 0.into(), 0.into(), 0.into(), two_i.clone(), 0.into()].to_vec(),
    )
    .expect("arity 3");
    let hat_h_scalar = &two_i * &Scalar::sqrt2();
    let m_f = int_matrix([[0, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 0]]);
    let m_g = int_matrix([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]]);
    let m_g_hat = int_matrix([[-1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]]);
    let m_f_hat = int_matrix([[1, -1, -1, -1], [-1, -1, 1, -1], [-1, 1, -1, -1], [-1, -1, -1, 1]]);
    vec![
        Fixture { name: "g", value: V::Symmetric(g), note: "generalized Fibonacci gate of type 0" },
        Fixture { name: "h", value: V::Signature(h), note: "asymmetric variant of g" },
        Fixture {
            name: "hat_h",
            value: V::Signature(hat_h),
            note: "Z^(x)3 h divided by hat_h_scalar",
        },
        Fixture { name: "hat_h_scalar", value: V::Scalar(hat_h_scalar), note: "2 i sqrt 2" },
        Fixture { name: "Z", value: V::Transform(z()), note: "[[1,1],[i,-i]] / sqrt 2" },
        Fixture {
            name: "cycle_cover",
            value: V::Symmetric(SymmetricSignature::from_ints(&[0, 0, 1, 0, 0])),
            note: "cycle covers of a 4-regular graph",
        },
        Fixture { name: "M_f", value: V::Matrix(Box::new(m_f)), note: "signature matrix of cycle_cover" },
        Fixture {
            name: "M_g",
            value: V::Matrix(Box::new(m_g)),
            note: "non-crossing cycle covers: disequalities on {x1,x3} and {x2,x4}",
        },
        Fixture {
            name: "M_g_hat",
            value: V::Matrix(Box::new(m_g_hat)),
            note: "(Z^-1)^(x)4 applied to M_g",
        },
        Fixture {
            name: "orientation_1",
            value: V::Signature(orientation_signature(&Scalar::one())),
            note: "Equality(x1,x3) Equality(x2,x4)",
        },
        Fixture {
            name: "orientation_minus_1",
            value: V::Signature(orientation_signature(&Scalar::from(-1))),
            note: "equals the signature of M_g_hat",
        },
        Fixture {
            name: "orientation_i",
            value: V::Signature(orientation_signature(&Scalar::i())),
            note: "i^(3 x1^2 + 3 x2^2 + 2 x1 x2 + 1) on x1 = x3, x2 = x4",
        },
        Fixture { name: "enigmatic_f", value: V::Signature(enigmatic_f()), note: "over one radical y" },
        Fixture {
            name: "enigmatic_f_hat",
            value: V::Signature(from_signature_matrix(&m_f_hat)),
            note: "from M_f_hat",
        },
        Fixture { name: "M_f_hat", value: V::Matrix(Box::new(m_f_hat)), note: "signature matrix of enigmatic_f_hat" },
        Fixture { name: "enigmatic_Q", value: V::Form(enigmatic_q()), note: "enigmatic_f_hat = i^Q" },
        Fixture { name: "c", value: V::Scalar(enigmatic_c()), note: "1 + sqrt 2 + sqrt(2 (1 + sqrt 2))" },
        Fixture { name: "T", value: V::Transform(enigmatic_transform()), note: "D_alpha [[1,c],[-c,1]]" },
        Fixture { name: "K4_exact_one", value: V::Grid(k4_exact_one()), note: "Holant 3" },
    ]
}

/// Looks up a fixture by name.
pub fn fixture(name: &str) -> Option<FixtureValue> {
    fixtures().into_iter().find(|f| f.name == name).map(|f| f.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signatures::{expand, signature_matrix};

    fn eq2() -> DenseSignature {
        DenseSignature::from_ints(&[1, 0, 0, 1])
    }

    fn holant(g: &SignatureGrid) -> Scalar {
        eval_holant(g).unwrap().value
    }

    #[test]
    fn small_grids() {
        let two = regular_grid(2, &[(0, 1), (0, 1)], &eq2());
        assert!(holant(&two).equals(&2.into()).unwrap());
        let tri = regular_grid(3, &[(0, 1), (1, 2), (2, 0)], &eq2());
        assert!(holant(&tri).equals(&2.into()).unwrap());
        assert!(holant(&k4_exact_one()).equals(&3.into()).unwrap());
    }

    #[test]
    fn self_loops_share_one_value() {
        // a loop on a ternary vertex joined to a unary [1, 5]
        let grid = SignatureGrid {
            edges: 2,
            vertices: vec![
                GridVertex { signature: expand(&SymmetricSignature::from_ints(&[1, 2, 3, 4])), incident: vec![0, 0, 1] },
                GridVertex { signature: DenseSignature::from_ints(&[1, 5]), incident: vec![1] },
            ],
            bipartite: None,
        };
        // f(000) + 5 f(001) + f(110) + 5 f(111)
        assert!(holant(&grid).equals(&(1 + 10 + 3 + 20).into()).unwrap());
    }

    #[test]
    fn edge_limit_and_validation() {
        let grid = k4_exact_one();
        assert_eq!(
            eval_holant_with_limit(&grid, 5).unwrap_err(),
            HolantError::TooManyEdges { edges: 6, limit: 5 }
        );
        let lone = SignatureGrid {
            edges: 0,
            vertices: vec![GridVertex { signature: DenseSignature::from_ints(&[1, 1]), incident: vec![] }],
            bipartite: None,
        };
        assert!(matches!(two_stretch(&lone), Err(HolantError::InvalidGrid(_))));
    }

    #[test]
    fn stretching_keeps_the_value() {
        let two = regular_grid(2, &[(0, 1), (0, 1)], &eq2());
        let s = two_stretch(&two).unwrap();
        assert_eq!(s.vertices.len(), 4);
        assert!(holant(&s).equals(&2.into()).unwrap());
        let tri = regular_grid(3, &[(0, 1), (1, 2), (2, 0)], &eq2());
        assert!(holant(&two_stretch(&tri).unwrap()).equals(&2.into()).unwrap());
        let z = Transform::z();
        let s = two_stretch(&k4_exact_one()).unwrap();
        assert!(holant(&transform_grid(&s, &z).unwrap()).equals(&3.into()).unwrap());
    }

    #[test]
    fn transformations() {
        let grid = k4_exact_one();
        let same = transform_grid(&grid, &Transform::identity()).unwrap();
        for (a, b) in grid.vertices.iter().zip(&same.vertices) {
            assert!(a.signature.equals(&b.signature).unwrap());
        }
        let h = crate::signatures::rational_rotation(&crate::scalars::Rational::new(1.into(), 2.into()));
        assert!(holant(&transform_grid(&grid, &h).unwrap()).equals(&3.into()).unwrap());
        assert_eq!(
            transform_grid(&grid, &Transform::from_ints(1, 1, 0, 1)).unwrap_err(),
            HolantError::NotOrthogonal
        );
    }

    #[test]
    fn fixture_relations() {
        let Some(FixtureValue::Signature(h)) = fixture("h") else { panic!() };
        let Some(FixtureValue::Signature(hat_h)) = fixture("hat_h") else { panic!() };
        let Some(FixtureValue::Scalar(k)) = fixture("hat_h_scalar") else { panic!() };
        assert!(apply_transform(&z(), &h).equals(&hat_h.scale(&k)).unwrap());

        let Some(FixtureValue::Matrix(m_g)) = fixture("M_g") else { panic!() };
        let Some(FixtureValue::Matrix(m_g_hat)) = fixture("M_g_hat") else { panic!() };
        let g = from_signature_matrix(&m_g);
        let hat = apply_transform(&z().inverse().unwrap(), &g);
        let got = signature_matrix(&hat);
        for (r, w) in got.iter().zip(m_g_hat.iter()) {
            for (x, y) in r.iter().zip(w) {
                assert!(x.equals(y).unwrap());
            }
        }
        assert!(orientation_signature(&Scalar::from(-1)).equals(&hat).unwrap());

        let Some(FixtureValue::Signature(f_hat)) = fixture("enigmatic_f_hat") else { panic!() };
        let q = enigmatic_q();
        for x in 0..16usize {
            let coords = (0..4).fold(0, |a, k| a | (x >> (3 - k) & 1) << k);
            assert!(f_hat.entry(x).equals(&Scalar::i_pow(q.eval(coords) as i64)).unwrap());
        }
    }

    #[test]
    fn orientation_i_form() {
        let f = orientation_signature(&Scalar::i());
        for (x1, x2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let idx = x1 << 3 | x2 << 2 | x1 << 1 | x2;
            let q = 3 * x1 + 3 * x2 + 2 * x1 * x2 + 1;
            assert!(f.entry(idx).equals(&Scalar::i_pow(q as i64)).unwrap());
        }
    }
}
