//! Resolution trees and the δ = const gluing collision.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{Series, TypeName};
use crate::collision::{kind_of, Kind};
use crate::error::{Error, Result};
use crate::invariants::InvariantRecord;

/// Infinitely near points with the multiplicities of the strict transform.
/// Leaves are branches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolutionTree {
    pub m: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ResolutionTree>,
}

impl ResolutionTree {
    pub fn leaf() -> Self {
        ResolutionTree {
            m: 1,
            children: Vec::new(),
        }
    }

    pub fn node(m: u32, children: Vec<ResolutionTree>) -> Self {
        ResolutionTree { m, children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Domain("tree multiplicities must be ≥ 1".into()));
        }
        for c in &self.children {
            if c.m > self.m {
                return Err(Error::Domain(format!(
                    "multiplicity increases from {} to {}",
                    self.m, c.m
                )));
            }
            c.validate()?;
        }
        Ok(())
    }

    pub fn leaves(&self) -> u32 {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(ResolutionTree::leaves).sum()
        }
    }

    pub fn delta(&self) -> u32 {
        self.m * (self.m - 1) / 2 + self.children.iter().map(ResolutionTree::delta).sum::<u32>()
    }

    pub fn at(&self, path: &[usize]) -> Option<&ResolutionTree> {
        path.iter().try_fold(self, |t, &i| t.children.get(i))
    }

    fn at_mut(&mut self, path: &[usize]) -> Option<&mut ResolutionTree> {
        path.iter().try_fold(self, |t, &i| t.children.get_mut(i))
    }

    fn free_leaf_children(&self) -> usize {
        self.children
            .iter()
            .filter(|c| c.is_leaf() && c.m == 1)
            .count()
    }

    /// A_k: ⌊(k+1)/2⌋ double points, then one leaf (k even) or two (k odd).
    pub fn a(k: u32) -> Self {
        let tail = if k % 2 == 1 {
            vec![Self::leaf(), Self::leaf()]
        } else {
            vec![Self::leaf()]
        };
        (0..(k + 1) / 2)
            .fold(None, |inner: Option<Self>, _| {
                Some(Self::node(
                    2,
                    inner.map(|t| vec![t]).unwrap_or_else(|| tail.clone()),
                ))
            })
            .unwrap_or_else(Self::leaf)
    }

    /// D_k: a triple point resolving into a free line and an A_{k−5} point.
    pub fn d(k: u32) -> Self {
        if k == 4 {
            return Self::omp(3);
        }
        Self::node(3, vec![Self::leaf(), Self::a(k - 5)])
    }

    pub fn omp(m: u32) -> Self {
        Self::node(m, (0..m).map(|_| Self::leaf()).collect())
    }

    pub fn j10() -> Self {
        Self::node(3, vec![Self::omp(3)])
    }
}

pub fn tree_invariants(t: &ResolutionTree) -> Result<InvariantRecord> {
    t.validate()?;
    let (delta, r) = (t.delta(), t.leaves());
    let mu = (2 * delta + 1)
        .checked_sub(r)
        .ok_or_else(|| Error::Domain(format!("tree with δ {delta} cannot carry {r} branches")))?;
    InvariantRecord::new(t.m, mu, r)
}

/// Stored trees for A_k, D_k, ordinary multiple points and J10.
pub fn catalog_tree(t: &TypeName) -> Result<ResolutionTree> {
    let ix = t.indices();
    Ok(match (t.series(), ix) {
        (Series::A, [k]) => ResolutionTree::a(*k),
        (Series::D, [k]) => ResolutionTree::d(*k),
        (Series::J, [2, 0]) => ResolutionTree::j10(),
        _ => match kind_of(t) {
            Kind::Omp(m) => ResolutionTree::omp(m),
            _ => {
                return Err(Error::Unsupported(format!(
                    "no stored resolution tree for {t}"
                )))
            }
        },
    })
}

/// Where to glue: the vertex at `path` and its free leaf children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSpec {
    pub path: Vec<usize>,
    pub k: u32,
}

/// Deepest vertex with at least k free leaf children, leftmost among equals.
pub fn find_potentially_free(t: &ResolutionTree, k: u32) -> Option<GlueSpec> {
    fn walk(t: &ResolutionTree, k: u32, path: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
        if t.free_leaf_children() >= k as usize
            && best.as_ref().is_none_or(|b| path.len() > b.len())
        {
            *best = Some(path.clone());
        }
        for (i, c) in t.children.iter().enumerate() {
            path.push(i);
            walk(c, k, path, best);
            path.pop();
        }
    }
    if k == 0 {
        return None;
    }
    let mut best = None;
    walk(t, k, &mut Vec::new(), &mut best);
    best.map(|path| GlueSpec { path, k })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub delta: bool,
    pub mult: bool,
    pub mu: bool,
    pub branches: bool,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.delta && self.mult && self.mu && self.branches
    }
}

/// Replace m_y free leaves at the glue vertex by the tree of S_y.
pub fn delta_const_collide(
    tx: &ResolutionTree,
    ty: &ResolutionTree,
) -> Result<(ResolutionTree, InvariantRecord, IdentityReport)> {
    let (ix, iy) = (tree_invariants(tx)?, tree_invariants(ty)?);
    if tx.m < ty.m {
        return Err(Error::OrderConvention(format!(
            "need mult S_x ≥ mult S_y, got {} < {}",
            tx.m, ty.m
        )));
    }
    let spec = find_potentially_free(tx, ty.m).ok_or_else(|| {
        Error::Precondition(format!("no vertex with {} potentially free branches", ty.m))
    })?;
    let mut out = tx.clone();
    let v = out
        .at_mut(&spec.path)
        .ok_or_else(|| Error::Internal("glue path vanished".into()))?;
    let mut removed = 0;
    v.children.retain(|c| {
        if removed < ty.m && c.is_leaf() && c.m == 1 {
            removed += 1;
            false
        } else {
            true
        }
    });
    v.children.push(ty.clone());
    let f = tree_invariants(&out)?;
    let report = IdentityReport {
        delta: f.delta() == ix.delta() + iy.delta(),
        mult: f.mult() == ix.mult(),
        mu: f.mu() + 1 == ix.mu() + iy.mu() + iy.mult(),
        branches: f.r() + iy.mult() == ix.r() + iy.r(),
    };
    Ok((out, f, report))
}

/// A tree whose children's multiplicities sum to the parent's, up to
/// `depth` levels below the root.
pub fn random_tree<R: Rng>(rng: &mut R, max_m: u32, depth: u32) -> ResolutionTree {
    let m = rng.gen_range(1..=max_m.max(1));
    grow(rng, m, depth)
}

fn grow<R: Rng>(rng: &mut R, m: u32, depth: u32) -> ResolutionTree {
    if m == 1 {
        return ResolutionTree::leaf();
    }
    if depth == 0 {
        return ResolutionTree::omp(m);
    }
    let mut left = m;
    let mut children = Vec::new();
    while left > 0 {
        let part = rng.gen_range(1..=left);
        children.push(grow(rng, part, depth - 1));
        left -= part;
    }
    ResolutionTree::node(m, children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::normal_form;
    use crate::invariants::milnor_local;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> TypeName {
        s.parse().unwrap()
    }

    #[test]
    fn small_trees() {
        let a1 = tree_invariants(&ResolutionTree::a(1)).unwrap();
        assert_eq!((a1.delta(), a1.r(), a1.mu()), (1, 2, 1));
        let d4 = tree_invariants(&ResolutionTree::d(4)).unwrap();
        assert_eq!((d4.delta(), d4.r(), d4.mu()), (3, 3, 4));
        let j = tree_invariants(&ResolutionTree::j10()).unwrap();
        assert_eq!((j.delta(), j.r(), j.mu()), (6, 3, 10));
    }

    #[test]
    fn catalog_trees_match_milnor() {
        for name in (1..=9)
            .map(TypeName::a)
            .chain((4..=9).map(TypeName::d))
            .chain([t("J10"), TypeName::omp(5)])
        {
            let rec = tree_invariants(&catalog_tree(&name).unwrap()).unwrap();
            let mu = milnor_local(&normal_form(&name).unwrap().poly).unwrap();
            assert_eq!(rec.mu(), mu, "{name}");
        }
        assert!(catalog_tree(&t("E6")).is_err());
    }

    #[test]
    fn potentially_free() {
        assert_eq!(
            find_potentially_free(&ResolutionTree::d(4), 3)
                .unwrap()
                .path,
            Vec::<usize>::new()
        );
        assert_eq!(
            find_potentially_free(&ResolutionTree::a(2), 1)
                .unwrap()
                .path,
            Vec::<usize>::new()
        );
        assert_eq!(
            find_potentially_free(&ResolutionTree::a(4), 1)
                .unwrap()
                .path,
            vec![0]
        );
        assert!(find_potentially_free(&ResolutionTree::a(1), 3).is_none());
        let two = ResolutionTree::node(3, vec![ResolutionTree::omp(2), ResolutionTree::omp(2)]);
        assert_eq!(find_potentially_free(&two, 2).unwrap().path, vec![0]);
    }

    #[test]
    fn glue_examples() {
        let (tree, rec, rep) =
            delta_const_collide(&ResolutionTree::a(1), &ResolutionTree::a(1)).unwrap();
        assert_eq!(tree, ResolutionTree::a(3));
        assert_eq!((rec.delta(), rec.mu(), rec.r()), (2, 3, 2));
        assert!(rep.all_pass());
        let (tree, rec, _) =
            delta_const_collide(&ResolutionTree::d(4), &ResolutionTree::d(4)).unwrap();
        assert_eq!(tree, ResolutionTree::j10());
        assert_eq!(rec.mu(), 10);
        let (_, rec, _) =
            delta_const_collide(&ResolutionTree::omp(4), &ResolutionTree::omp(3)).unwrap();
        assert_eq!((rec.delta(), rec.mu(), rec.r()), (9, 15, 4));
        assert!(matches!(
            delta_const_collide(&ResolutionTree::a(2), &ResolutionTree::a(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&ResolutionTree::a(1)).unwrap();
        assert_eq!(s, r#"{"m":2,"children":[{"m":1},{"m":1}]}"#);
        let back: ResolutionTree = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ResolutionTree::a(1));
    }

    proptest! {
        #[test]
        fn glue_identities(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tx = random_tree(&mut rng, 6, 3);
            let ty = random_tree(&mut rng, 4, 2);
            if let Ok((_, _, rep)) = delta_const_collide(&tx, &ty) {
                prop_assert!(rep.all_pass());
            }
        }

        #[test]
        fn random_trees_are_valid(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tr = random_tree(&mut rng, 6, 3);
            prop_assert!(tr.validate().is_ok());
            let rec = tree_invariants(&tr).unwrap();
            prop_assert_eq!(rec.mu() + rec.r(), 2 * rec.delta() + 1);
        }
    }
}
