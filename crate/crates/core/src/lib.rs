//! Normal-form parsing for Combinatory Categorial Grammar.
//!
//! Under generalized composition a sentence can have a Catalan number of
//! derivations that all mean the same thing. This crate parses in three
//! modes:
//!
//! - [`chart::parse_exhaustive`]: every derivation the grammar allows.
//! - [`chart::parse_nf`]: only normal-form derivations, one per reading when
//!   the grammar admits every rule instance (or a friendly subset).
//! - [`canonical::parse_canonical`]: one representative per reading for any
//!   restricted rule set, using cached normal forms as class keys.
//!
//! [`semantics`] computes the lambda-term recipe of a derivation and serves
//! as an independent check on both parsers.

pub mod canonical;
pub mod category;
pub mod chart;
pub mod cli;
pub mod demos;
pub mod grammar;
pub mod rules;
pub mod semantics;
pub mod tags;
pub mod tree;

pub use canonical::{nf_key_equal, nf_rewrite, parse_canonical, NfId, NfStore, Preference, PreferencePolicy};
pub use category::{parse_category, print_category, Atom, Category, SlashDir};
pub use chart::{parse_exhaustive, parse_nf, Chart, ChartError, ParseMode};
pub use grammar::{load_lexicon, load_policy, Grammar, LexEntry, RulePolicy};
pub use rules::{enumerate_rules, try_compose, try_substitute, RuleInstance, RuleKind};
pub use semantics::{alpha_equal, beta_normalize, group_into_classes, recipe_of, Recipe};
pub use tags::{nf_admissible, output_tag, TagClass};
pub use tree::ParseTree;
