//! The varieties `V_w = { P(x^2, w x^{q+1}) : x in F_K^* }` and the cap
//! `V_1 ∪ V_alpha`.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldCtx, Level};
use crate::pg::{self, ProjPoint};

/// Default bound on the number of projective points an exhaustive pass may visit.
pub const DEFAULT_MAX_SPACE: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    V1,
    Valpha,
}

#[derive(Clone, Debug)]
pub struct CapSet {
    pub alpha: Elem,
    pub points: Vec<ProjPoint>,
    pub labels: Vec<Label>,
    index: HashMap<ProjPoint, usize>,
}

impl CapSet {
    /// Builds a point set with labels; duplicates are rejected.
    pub fn new(alpha: Elem, points: Vec<ProjPoint>, labels: Vec<Label>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::Format("points and labels differ in length".into()));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(*p, i).is_some() {
                return Err(Error::DuplicatePoint);
            }
        }
        Ok(CapSet {
            alpha,
            points,
            labels,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &ProjPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn label_of(&self, p: &ProjPoint) -> Option<Label> {
        self.position(p).map(|i| self.labels[i])
    }

    pub fn with_label(&self, label: Label) -> impl Iterator<Item = (usize, &ProjPoint)> {
        self.points
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.labels[*i] == label)
    }

    /// Copy without the point at `idx`.
    pub fn without(&self, idx: usize) -> Self {
        let mut points = self.points.clone();
        let mut labels = self.labels.clone();
        points.remove(idx);
        labels.remove(idx);
        CapSet::new(self.alpha, points, labels).expect("subset of a valid set")
    }

    /// Copy with one more point appended.
    pub fn with_point(&self, p: ProjPoint, label: Label) -> Result<Self> {
        let mut points = self.points.clone();
        let mut labels = self.labels.clone();
        points.push(p);
        labels.push(label);
        CapSet::new(self.alpha, points, labels)
    }
}

/// `(q^k - 1) / (q - 1)`, the size of each `V_w`, `Π1` and `Π2`.
pub fn variety_size(ctx: &FieldCtx) -> u64 {
    (ctx.order(Level::FK) - 1) / (u64::from(ctx.q()) - 1)
}

/// `x -> P(x^2, w x^{q+1})` without deduplication.
pub fn veronese_point(ctx: &FieldCtx, omega: Elem, x: Elem) -> ProjPoint {
    let fk = ctx.fk();
    let x2 = fk.square(x);
    let xq1 = fk.mul(fk.pow(x, u64::from(ctx.q())), x);
    pg::normalize(ctx, x2, fk.mul(omega, xq1)).expect("x is nonzero")
}

pub fn veronese_cap(ctx: &FieldCtx, omega: Elem) -> Result<BTreeSet<ProjPoint>> {
    if omega.is_zero() {
        return Err(Error::ZeroOmega);
    }
    Ok((1..ctx.fk().order())
        .map(|x| veronese_point(ctx, omega, Elem(x)))
        .collect())
}

/// `-1` for odd `q`, the primitive element of `F_q` for even `q`.
pub fn pick_alpha(ctx: &FieldCtx) -> Elem {
    if ctx.is_odd() {
        ctx.fq().neg(Elem::ONE)
    } else {
        ctx.generator(Level::Fq)
    }
}

pub fn check_alpha(ctx: &FieldCtx, alpha: Elem) -> Result<()> {
    if ctx.is_odd() {
        if alpha != ctx.fq().neg(Elem::ONE) {
            return Err(Error::BadAlpha("alpha must be -1 for odd q".into()));
        }
    } else if alpha.0 >= ctx.q() || alpha.0 < 2 {
        return Err(Error::BadAlpha(format!(
            "alpha must lie in F_q \\ {{0, 1}}, got {alpha}"
        )));
    }
    Ok(())
}

pub fn build_cap(ctx: &FieldCtx) -> Result<CapSet> {
    build_cap_with_alpha(ctx, pick_alpha(ctx))
}

/// `V_1` (sorted) followed by `V_alpha` (sorted).
pub fn build_cap_with_alpha(ctx: &FieldCtx, alpha: Elem) -> Result<CapSet> {
    ctx.n()?;
    check_alpha(ctx, alpha)?;
    let v1 = veronese_cap(ctx, Elem::ONE)?;
    let va = veronese_cap(ctx, alpha)?;
    let mut points = Vec::with_capacity(v1.len() + va.len());
    let mut labels = Vec::with_capacity(points.capacity());
    points.extend(v1.iter().copied());
    labels.extend(std::iter::repeat_n(Label::V1, v1.len()));
    points.extend(va.iter().copied());
    labels.extend(std::iter::repeat_n(Label::Valpha, va.len()));
    let cap = CapSet::new(alpha, points, labels)?;
    let half = variety_size(ctx) as usize;
    if v1.len() != half || va.len() != half {
        return Err(Error::InternalContradiction(
            "variety of unexpected size".into(),
        ));
    }
    Ok(cap)
}

/// `P` under `phi^i : v(a, b) -> v(eta^{2i} a, eta^{(q+1)i} b)`.
pub fn apply_phi(ctx: &FieldCtx, p: &ProjPoint, i: i64) -> ProjPoint {
    let fk = ctx.fk();
    let n = ctx.order(Level::FK) - 1;
    let eta = ctx.generator(Level::FK);
    let e = i.rem_euclid(n as i64) as u64;
    let q1 = u64::from(ctx.q()) + 1;
    let sa = fk.pow(eta, (2 * e) % n);
    let sb = fk.pow(eta, ((q1 % n) * e) % n);
    pg::normalize(ctx, fk.mul(sa, p.a), fk.mul(sb, p.b)).expect("phi is invertible")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaLabel {
    Pi1,
    Pi2,
    Omega(Elem),
}

/// A point off `Π1 ∪ Π2` written as `(a, b) = lambda0 (x0^2, w x0^{q+1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaWitness {
    pub omega: Elem,
    pub lambda0: Elem,
    pub x0: Elem,
}

/// Recovers `w`, `lambda0` and `x0` for `P(a, b)` with `a, b` nonzero.
///
/// Non-squares of `F_q` stay non-squares in the odd-degree extension `F_K`,
/// so exactly one of `lambda0 in {1, nu}` makes `a / lambda0` a square.
pub fn omega_witness(ctx: &FieldCtx, a: Elem, b: Elem) -> Option<OmegaWitness> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let fk = ctx.fk();
    let lambda0 = if ctx.is_square(Level::FK, a) {
        Elem::ONE
    } else {
        ctx.nonsquare_q().expect("non-squares only occur for odd q")
    };
    let x0 = ctx
        .sqrt(Level::FK, fk.div(a, lambda0))
        .expect("lambda0 makes the quotient a square");
    let xq1 = fk.mul(fk.pow(x0, u64::from(ctx.q())), x0);
    let omega = fk.div(b, fk.mul(lambda0, xq1));
    Some(OmegaWitness {
        omega,
        lambda0,
        x0,
    })
}

pub fn omega_label(ctx: &FieldCtx, p: &ProjPoint) -> OmegaLabel {
    if p.a.is_zero() {
        OmegaLabel::Pi1
    } else if p.b.is_zero() {
        OmegaLabel::Pi2
    } else {
        OmegaLabel::Omega(omega_witness(ctx, p.a, p.b).expect("a, b nonzero").omega)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapReport {
    pub size: usize,
    pub pairs_checked: u64,
    /// Collinear triples as sorted index triples into the checked point list.
    pub violations: Vec<[usize; 3]>,
    pub is_cap: bool,
    pub elapsed_ms: u128,
}

/// No three collinear: for every pair, no interior point of its chord is in
/// the set.
pub fn verify_cap(ctx: &FieldCtx, points: &[ProjPoint]) -> CapReport {
    let start = std::time::Instant::now();
    let index: HashMap<ProjPoint, usize> =
        points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let violations: BTreeSet<[usize; 3]> = (0..points.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let index = &index;
            (i + 1..points.len()).flat_map(move |j| {
                pg::interior_points(ctx, &points[i], &points[j])
                    .filter_map(move |r| index.get(&r).copied())
                    .map(move |m| {
                        let mut t = [i, j, m];
                        t.sort_unstable();
                        t
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let n = points.len() as u64;
    CapReport {
        size: points.len(),
        pairs_checked: n * n.saturating_sub(1) / 2,
        is_cap: violations.is_empty(),
        violations: violations.into_iter().collect(),
        elapsed_ms: start.elapsed().as_millis(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub total_points: u64,
    pub pi1: u64,
    pub pi2: u64,
    pub omega_classes: u64,
    /// Distinct class sizes observed among the `V_w` classes.
    pub class_sizes: Vec<u64>,
    pub expected_class_size: u64,
    /// Points whose label did not reproduce them (must be 0).
    pub mislabeled: u64,
    pub ok: bool,
}

/// Per-slice tallies: omega classes, `Pi_1`, `Pi_2`, points seen, mislabeled.
type ClassRow = (HashMap<Elem, u64>, u64, u64, u64, u64);

/// Labels every point of the space and checks the classes partition it.
pub fn verify_partition(ctx: &FieldCtx, max_space: u64) -> Result<PartitionReport> {
    let total = pg::point_count(ctx);
    if total > max_space {
        return Err(Error::TooLarge {
            size: total,
            bound: max_space,
        });
    }
    let k = ctx.fk().order() as usize;
    let rows: Vec<ClassRow> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut classes: HashMap<Elem, u64> = HashMap::new();
            let (mut pi1, mut pi2, mut seen, mut bad) = (0, 0, 0, 0);
            for p in pg::enumerate_range(ctx, a * k, (a + 1) * k) {
                seen += 1;
                match omega_label(ctx, &p) {
                    OmegaLabel::Pi1 => pi1 += 1,
                    OmegaLabel::Pi2 => pi2 += 1,
                    OmegaLabel::Omega(w) => {
                        let wit = omega_witness(ctx, p.a, p.b).expect("off Pi1 and Pi2");
                        if veronese_point(ctx, w, wit.x0) != p {
                            bad += 1;
                        }
                        *classes.entry(w).or_default() += 1;
                    }
                }
            }
            (classes, pi1, pi2, seen, bad)
        })
        .collect();
    let mut classes: HashMap<Elem, u64> = HashMap::new();
    let (mut pi1, mut pi2, mut seen, mut bad) = (0, 0, 0, 0);
    for (c, a, b, s, x) in rows {
        for (w, n) in c {
            *classes.entry(w).or_default() += n;
        }
        pi1 += a;
        pi2 += b;
        seen += s;
        bad += x;
    }
    let expected = variety_size(ctx);
    let sizes: BTreeSet<u64> = classes.values().copied().collect();
    let class_total: u64 = classes.values().sum();
    let ok = seen == total
        && pi1 == expected
        && pi2 == expected
        && classes.len() as u64 == ctx.order(Level::FK) - 1
        && sizes.iter().all(|&s| s == expected)
        && pi1 + pi2 + class_total == total
        && bad == 0;
    Ok(PartitionReport {
        total_points: seen,
        pi1,
        pi2,
        omega_classes: classes.len() as u64,
        class_sizes: sizes.into_iter().collect(),
        expected_class_size: expected,
        mislabeled: bad,
        ok,
    })
}

/// Points of the cap as a set, for quick membership in tests and tools.
pub fn point_set(cap: &CapSet) -> HashSet<ProjPoint> {
    cap.points.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variety_sizes() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let v1 = veronese_cap(&ctx, Elem::ONE).unwrap();
        assert_eq!(v1.len(), 13);
        assert!(v1.contains(&ProjPoint { a: Elem(1), b: Elem(1) }));
        assert!(matches!(veronese_cap(&ctx, Elem::ZERO), Err(Error::ZeroOmega)));

        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        assert_eq!(veronese_cap(&ctx, Elem(7)).unwrap().len(), 21);
    }

    #[test]
    fn alpha_choice() {
        assert_eq!(pick_alpha(&FieldCtx::make_tower(3, 1, 1).unwrap()), Elem(2));
        assert_eq!(pick_alpha(&FieldCtx::make_tower(5, 1, 1).unwrap()), Elem(4));
        let ctx = FieldCtx::make_tower(2, 2, 1).unwrap();
        assert_eq!(pick_alpha(&ctx), Elem(2));
        assert!(check_alpha(&ctx, Elem(3)).is_ok());
        assert!(check_alpha(&ctx, Elem(1)).is_err());
        assert!(check_alpha(&FieldCtx::make_tower(5, 1, 1).unwrap(), Elem(2)).is_err());
    }

    #[test]
    fn cap_sizes() {
        for (p, h, n, size) in [(3, 1, 1, 26), (5, 1, 1, 62), (3, 1, 2, 242)] {
            let ctx = FieldCtx::make_tower(p, h, n).unwrap();
            let cap = build_cap(&ctx).unwrap();
            assert_eq!(cap.len(), size);
            assert_eq!(cap.with_label(Label::V1).count(), size / 2);
        }
    }

    #[test]
    fn phi_orbit_of_p11_is_v1() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let p = ProjPoint { a: Elem(1), b: Elem(1) };
        assert_eq!(apply_phi(&ctx, &p, 0), p);
        let orbit: BTreeSet<_> = (0..26).map(|i| apply_phi(&ctx, &p, i)).collect();
        assert_eq!(orbit, veronese_cap(&ctx, Elem::ONE).unwrap());
        assert_eq!(apply_phi(&ctx, &apply_phi(&ctx, &p, 5), -5), p);
    }

    #[test]
    fn label_of_parametrized_points() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        for w in 1..27 {
            let p = pg::normalize(&ctx, Elem(1), Elem(w)).unwrap();
            assert_eq!(omega_label(&ctx, &p), OmegaLabel::Omega(Elem(w)));
            for x in [1u32, 4, 11, 25] {
                let p = veronese_point(&ctx, Elem(w), Elem(x));
                assert_eq!(omega_label(&ctx, &p), OmegaLabel::Omega(Elem(w)));
            }
        }
    }

    #[test]
    fn tiny_sets_are_caps() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let pts = [ProjPoint { a: Elem(1), b: Elem(0) }, ProjPoint { a: Elem(0), b: Elem(1) }];
        assert!(verify_cap(&ctx, &pts).is_cap);
        assert!(verify_cap(&ctx, &pts[..1]).is_cap);
        assert!(verify_cap(&ctx, &[]).is_cap);
    }

    #[test]
    fn partition_small() {
        let ctx = FieldCtx::make_tower(3, 1, 1).unwrap();
        let r = verify_partition(&ctx, DEFAULT_MAX_SPACE).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!((r.omega_classes, r.pi1, r.pi2, r.total_points), (26, 13, 13, 364));
        assert!(matches!(
            verify_partition(&ctx, 100),
            Err(Error::TooLarge { size: 364, bound: 100 })
        ));
    }
}
