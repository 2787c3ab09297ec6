//! Binary rule templates: generalized composition `>Bn`/`<Bn` and
//! substitution `>S`/`<S`, instantiated on concrete category pairs.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::category::{Category, SlashDir};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RuleKind {
    /// Degree 0 is application; higher degrees are composition.
    Compose { dir: SlashDir, degree: usize },
    Substitute { dir: SlashDir },
}

impl RuleKind {
    pub const fn fwd(degree: usize) -> RuleKind {
        RuleKind::Compose { dir: SlashDir::Forward, degree }
    }

    pub const fn bwd(degree: usize) -> RuleKind {
        RuleKind::Compose { dir: SlashDir::Backward, degree }
    }

    pub const FWD_SUBST: RuleKind = RuleKind::Substitute { dir: SlashDir::Forward };
    pub const BWD_SUBST: RuleKind = RuleKind::Substitute { dir: SlashDir::Backward };

    pub fn dir(self) -> SlashDir {
        match self {
            RuleKind::Compose { dir, .. } | RuleKind::Substitute { dir } => dir,
        }
    }

    /// Composition degree, or `None` for substitution.
    pub fn degree(self) -> Option<usize> {
        match self {
            RuleKind::Compose { degree, .. } => Some(degree),
            RuleKind::Substitute { .. } => None,
        }
    }

    pub fn is_substitution(self) -> bool {
        matches!(self, RuleKind::Substitute { .. })
    }

    /// Applies the template to `(left, right)`.
    pub fn apply(self, left: &Category, right: &Category) -> Option<Category> {
        match self {
            RuleKind::Compose { dir, degree } => try_compose(left, right, dir, degree),
            RuleKind::Substitute { dir } => try_substitute(left, right, dir),
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = |d: SlashDir| if d == SlashDir::Forward { '>' } else { '<' };
        match *self {
            RuleKind::Compose { dir, degree } => write!(f, "{}B{}", arrow(dir), degree),
            RuleKind::Substitute { dir } => write!(f, "{}S", arrow(dir)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rule name {0:?} (expected e.g. >B0, <B2, >S)")]
pub struct BadRuleName(pub String);

impl FromStr for RuleKind {
    type Err = BadRuleName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadRuleName(s.to_string());
        let mut chars = s.chars();
        let dir = match chars.next() {
            Some('>') => SlashDir::Forward,
            Some('<') => SlashDir::Backward,
            _ => return Err(bad()),
        };
        match chars.next() {
            Some('S') if chars.as_str().is_empty() => Ok(RuleKind::Substitute { dir }),
            Some('B') => {
                let degree = chars.as_str().parse().map_err(|_| bad())?;
                Ok(RuleKind::Compose { dir, degree })
            }
            _ => Err(bad()),
        }
    }
}

/// A fully instantiated phrase-structure rule `left right -> output`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RuleInstance {
    kind: RuleKind,
    left: Category,
    right: Category,
    output: Category,
}

impl RuleInstance {
    /// Instantiates `kind` on the pair, or `None` if the template does not match.
    pub fn new(kind: RuleKind, left: &Category, right: &Category) -> Option<RuleInstance> {
        kind.apply(left, right).map(|output| RuleInstance {
            kind,
            left: left.clone(),
            right: right.clone(),
            output,
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn left(&self) -> &Category {
        &self.left
    }

    pub fn right(&self) -> &Category {
        &self.right
    }

    pub fn output(&self) -> &Category {
        &self.output
    }

    /// True when some `|i` in the secondary argument points against the
    /// rule's own direction (e.g. `A/B B\C -> A\C`).
    pub fn is_crossing(&self) -> bool {
        match self.kind {
            RuleKind::Compose { dir: SlashDir::Forward, degree } => {
                slashes_differ(&self.right, degree, SlashDir::Forward)
            }
            RuleKind::Compose { dir: SlashDir::Backward, degree } => {
                slashes_differ(&self.left, degree, SlashDir::Backward)
            }
            RuleKind::Substitute { dir } => slashes_differ(&self.right, 1, dir),
        }
    }
}

fn slashes_differ(secondary: &Category, n: usize, dir: SlashDir) -> bool {
    secondary
        .strip(n)
        .map(|(_, pairs)| pairs.iter().any(|(d, _)| *d != dir))
        .unwrap_or(false)
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} -> {} [{}]", self.left, self.right, self.output, self.kind)
    }
}

/// Generalized composition of degree `degree` (application when 0).
///
/// Forward: `x/y  y|n zn ... |1 z1  ->  x|n zn ... |1 z1`.
/// Backward: `y|n zn ... |1 z1  x\y  ->  x|n zn ... |1 z1`.
pub fn try_compose(
    left: &Category,
    right: &Category,
    dir: SlashDir,
    degree: usize,
) -> Option<Category> {
    let (functor, secondary) = match dir {
        SlashDir::Forward => (left, right),
        SlashDir::Backward => (right, left),
    };
    let (x, fdir, y) = functor.as_functor()?;
    if fdir != dir {
        return None;
    }
    let (head, pairs) = secondary.strip(degree)?;
    if head != y {
        return None;
    }
    Some(Category::attach(x.clone(), pairs))
}

/// Substitution.
///
/// Forward: `(x/y)|1 z  y|1 z  ->  x|1 z`.
/// Backward: `y|1 z  (x\y)|1 z  ->  x|1 z`.
pub fn try_substitute(left: &Category, right: &Category, dir: SlashDir) -> Option<Category> {
    let (functor, secondary) = match dir {
        SlashDir::Forward => (left, right),
        SlashDir::Backward => (right, left),
    };
    let (fres, d1, z) = functor.as_functor()?;
    let (y2, d1b, z2) = secondary.as_functor()?;
    if d1 != d1b || z != z2 {
        return None;
    }
    let (x, fdir, y) = fres.as_functor()?;
    if fdir != dir || y != y2 {
        return None;
    }
    Some(Category::slash(x.clone(), d1, z.clone()))
}

/// Every rule instance of degree at most `max_degree` (plus substitution
/// when requested) that combines `(left, right)`. Ordered forward
/// composition by degree, backward composition by degree, then `>S`, `<S`.
pub fn enumerate_rules(
    left: &Category,
    right: &Category,
    max_degree: usize,
    with_substitution: bool,
) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    for (dir, secondary) in [(SlashDir::Forward, right), (SlashDir::Backward, left)] {
        let top = max_degree.min(secondary.arity());
        for degree in 0..=top {
            if let Some(r) = RuleInstance::new(RuleKind::Compose { dir, degree }, left, right) {
                out.push(r);
            }
        }
    }
    if with_substitution {
        for kind in [RuleKind::FWD_SUBST, RuleKind::BWD_SUBST] {
            if let Some(r) = RuleInstance::new(kind, left, right) {
                out.push(r);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::parse_category;
    use proptest::prelude::*;

    fn cat(s: &str) -> Category {
        parse_category(s).unwrap()
    }

    #[test]
    fn application() {
        assert_eq!(try_compose(&cat("S/NP"), &cat("NP"), SlashDir::Forward, 0), Some(cat("S")));
        assert_eq!(try_compose(&cat("NP"), &cat("S\\NP"), SlashDir::Backward, 0), Some(cat("S")));
        assert_eq!(try_compose(&cat("S\\NP"), &cat("NP"), SlashDir::Forward, 0), None);
    }

    #[test]
    fn crossing_composition() {
        let r = try_compose(&cat("A/B"), &cat("B\\C"), SlashDir::Forward, 1);
        assert_eq!(r, Some(cat("A\\C")));
        let inst = RuleInstance::new(RuleKind::fwd(1), &cat("A/B"), &cat("B\\C")).unwrap();
        assert!(inst.is_crossing());
        let harmonic = RuleInstance::new(RuleKind::fwd(1), &cat("A/B"), &cat("B/C")).unwrap();
        assert!(!harmonic.is_crossing());
    }

    #[test]
    fn composition_mismatch() {
        assert_eq!(try_compose(&cat("A/B"), &cat("C/D"), SlashDir::Forward, 1), None);
    }

    #[test]
    fn backward_degree_two() {
        // <B2 with x=A, y=B, z2=D, z1=E.
        let r = try_compose(&cat("B/D/E"), &cat("A\\B"), SlashDir::Backward, 2);
        assert_eq!(r, Some(cat("A/D/E")));
    }

    #[test]
    fn substitution_both_directions() {
        let fwd = try_substitute(&cat("S\\NP/NP/NP"), &cat("NP/NP"), SlashDir::Forward);
        assert_eq!(fwd, Some(cat("S\\NP/NP")));
        let bwd = try_substitute(&cat("NP/NP"), &cat("S\\NP\\NP/NP"), SlashDir::Backward);
        assert_eq!(bwd, Some(cat("S\\NP/NP")));
        assert_eq!(try_substitute(&cat("A/B"), &cat("C/B"), SlashDir::Forward), None);
        assert_eq!(try_substitute(&cat("A/C/B"), &cat("C/B"), SlashDir::Forward), Some(cat("A/B")));
        // The shared argument must carry the same slash.
        assert_eq!(try_substitute(&cat("A/C/B"), &cat("C\\B"), SlashDir::Forward), None);
    }

    #[test]
    fn enumerate_modifier_pair() {
        let rules = enumerate_rules(&cat("S/S"), &cat("S\\S"), 1, false);
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].kind(), RuleKind::fwd(1));
        assert_eq!(*rules[0].output(), cat("S\\S"));
        assert!(rules[0].is_crossing());
        assert_eq!(rules[1].kind(), RuleKind::bwd(1));
        assert_eq!(*rules[1].output(), cat("S/S"));
        assert!(rules[1].is_crossing());
    }

    #[test]
    fn enumerate_trivial_cases() {
        assert!(enumerate_rules(&cat("NP"), &cat("NP"), 3, true).is_empty());
        let rules = enumerate_rules(&cat("S/NP"), &cat("NP"), 3, false);
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].kind(), RuleKind::fwd(0));
        assert_eq!(*rules[0].output(), cat("S"));
    }

    #[test]
    fn rule_names_round_trip() {
        for k in [RuleKind::fwd(0), RuleKind::bwd(3), RuleKind::FWD_SUBST, RuleKind::BWD_SUBST] {
            assert_eq!(k.to_string().parse::<RuleKind>().unwrap(), k);
        }
        assert!("B0".parse::<RuleKind>().is_err());
        assert!(">Sx".parse::<RuleKind>().is_err());
    }

    /// Template (4) matched symbol by symbol against an explicit list of
    /// `(slash, z)` pairs, without going through `strip`/`attach`.
    fn compose_by_template(
        l: &Category,
        r: &Category,
        dir: SlashDir,
        n: usize,
    ) -> Option<Category> {
        let (functor, mut sec) = if dir == SlashDir::Forward { (l, r.clone()) } else { (r, l.clone()) };
        let Category::Slashed(x, d, y) = functor else { return None };
        if *d != dir {
            return None;
        }
        let mut zs = Vec::new();
        for _ in 0..n {
            let Category::Slashed(res, d, z) = sec else { return None };
            zs.push((d, (*z).clone()));
            sec = (*res).clone();
        }
        if sec != **y {
            return None;
        }
        let mut out = (**x).clone();
        while let Some((d, z)) = zs.pop() {
            out = Category::slash(out, d, z);
        }
        Some(out)
    }

    fn arb_small() -> impl Strategy<Value = Category> {
        let leaf = prop::sample::select(vec!["A", "B", "C"]).prop_map(|s| Category::atom(s).unwrap());
        leaf.prop_recursive(4, 32, 2, |inner| {
            (inner.clone(), any::<bool>(), inner).prop_map(|(r, f, a)| {
                Category::slash(r, if f { SlashDir::Forward } else { SlashDir::Backward }, a)
            })
        })
    }

    proptest! {
        #[test]
        fn template_soundness(l in arb_small(), r in arb_small(), fwd in any::<bool>(), n in 0usize..4) {
            let dir = if fwd { SlashDir::Forward } else { SlashDir::Backward };
            let got = try_compose(&l, &r, dir, n);
            prop_assert_eq!(got.clone(), compose_by_template(&l, &r, dir, n));
            if let Some(c) = got {
                prop_assert!(c.arity() >= n);
            }
        }

        #[test]
        fn degree_zero_is_exact_argument_match(l in arb_small(), r in arb_small()) {
            let fwd_ok = matches!(l.as_functor(), Some((_, SlashDir::Forward, a)) if *a == r);
            prop_assert_eq!(try_compose(&l, &r, SlashDir::Forward, 0).is_some(), fwd_ok);
            let bwd_ok = matches!(r.as_functor(), Some((_, SlashDir::Backward, a)) if *a == l);
            prop_assert_eq!(try_compose(&l, &r, SlashDir::Backward, 0).is_some(), bwd_ok);
        }

        #[test]
        fn enumeration_has_no_duplicates(l in arb_small(), r in arb_small()) {
            let rules = enumerate_rules(&l, &r, 5, true);
            let set: std::collections::HashSet<_> = rules.iter().collect();
            prop_assert_eq!(set.len(), rules.len());
        }
    }
}
