//! Tag classes and the normal-form admissibility test.
//!
//! A constituent built by forward composition (`-FC`) may not be the
//! functor of a later forward rule, and symmetrically for `-BC` and
//! backward rules. Substitution only forbids composition outputs of
//! degree two or more as its functor.

use std::fmt;

use crate::category::SlashDir;
use crate::rules::{RuleInstance, RuleKind};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TagClass {
    /// Lexical item or output of an application rule.
    OT,
    /// Output of `>Bn`, n >= 1.
    FC(usize),
    /// Output of `<Bn`, n >= 1.
    BC(usize),
    /// Output of `>S`.
    SF,
    /// Output of `<S`.
    SB,
}

impl TagClass {
    pub fn is_standard(self) -> bool {
        self == TagClass::OT
    }

    /// Verbose rendering keeps the exact degree (`FC3`).
    pub fn render(self, verbose: bool) -> String {
        let clip = |n: usize| if verbose { n } else { n.min(2) };
        match self {
            TagClass::OT => "OT".into(),
            TagClass::FC(n) => format!("FC{}", clip(n)),
            TagClass::BC(n) => format!("BC{}", clip(n)),
            TagClass::SF => "SF".into(),
            TagClass::SB => "SB".into(),
        }
    }
}

impl fmt::Display for TagClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

pub fn kind_tag(kind: RuleKind) -> TagClass {
    match kind {
        RuleKind::Compose { degree: 0, .. } => TagClass::OT,
        RuleKind::Compose { dir: SlashDir::Forward, degree } => TagClass::FC(degree),
        RuleKind::Compose { dir: SlashDir::Backward, degree } => TagClass::BC(degree),
        RuleKind::Substitute { dir: SlashDir::Forward } => TagClass::SF,
        RuleKind::Substitute { dir: SlashDir::Backward } => TagClass::SB,
    }
}

pub fn output_tag(rule: &RuleInstance) -> TagClass {
    kind_tag(rule.kind())
}

/// Whether `rule` may combine children carrying these tags in a normal-form
/// derivation. Only the functor (primary) side is ever constrained.
pub fn kind_admissible(kind: RuleKind, left_tag: TagClass, right_tag: TagClass) -> bool {
    match kind {
        RuleKind::Compose { dir: SlashDir::Forward, .. } => !matches!(left_tag, TagClass::FC(_)),
        RuleKind::Compose { dir: SlashDir::Backward, .. } => !matches!(right_tag, TagClass::BC(_)),
        RuleKind::Substitute { dir: SlashDir::Forward } => !matches!(left_tag, TagClass::FC(n) if n >= 2),
        RuleKind::Substitute { dir: SlashDir::Backward } => {
            !matches!(right_tag, TagClass::BC(n) if n >= 2)
        }
    }
}

pub fn nf_admissible(rule: &RuleInstance, left_tag: TagClass, right_tag: TagClass) -> bool {
    kind_admissible(rule.kind(), left_tag, right_tag)
}
