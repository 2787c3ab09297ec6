//! CCG categories: atoms, slashed functors, and their text syntax.
//!
//! Slashes are left-associative, so `S\NP/NP` is `(S\NP)/NP`. Printing
//! emits the minimum number of parentheses needed to read back the same
//! tree.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// An atomic category name such as `S`, `NP` or `S_inf`.
///
/// Features are not unified; `S_inf` and `S` are simply different atoms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, CategoryError> {
        if is_atom_name(name) {
            Ok(Atom(Arc::from(name)))
        } else {
            Err(CategoryError::BadAtom(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SlashDir {
    /// `/`: the argument is sought to the right.
    Forward,
    /// `\`: the argument is sought to the left.
    Backward,
}

impl SlashDir {
    pub fn symbol(self) -> char {
        match self {
            SlashDir::Forward => '/',
            SlashDir::Backward => '\\',
        }
    }

    pub fn flip(self) -> SlashDir {
        match self {
            SlashDir::Forward => SlashDir::Backward,
            SlashDir::Backward => SlashDir::Forward,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Atomic(Atom),
    Slashed(Arc<Category>, SlashDir, Arc<Category>),
}

impl Category {
    pub fn atom(name: &str) -> Result<Category, CategoryError> {
        Atom::new(name).map(Category::Atomic)
    }

    pub fn slash(result: Category, dir: SlashDir, arg: Category) -> Category {
        Category::Slashed(Arc::new(result), dir, Arc::new(arg))
    }

    pub fn forward(result: Category, arg: Category) -> Category {
        Category::slash(result, SlashDir::Forward, arg)
    }

    pub fn backward(result: Category, arg: Category) -> Category {
        Category::slash(result, SlashDir::Backward, arg)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Category::Atomic(_))
    }

    /// `(result, dir, arg)` for a slashed category.
    pub fn as_functor(&self) -> Option<(&Category, SlashDir, &Category)> {
        match self {
            Category::Atomic(_) => None,
            Category::Slashed(res, dir, arg) => Some((res, *dir, arg)),
        }
    }

    /// Number of slashes along the result spine.
    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Category::Slashed(res, _, _) = cur {
            n += 1;
            cur = res;
        }
        n
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Category::Atomic(_) => 0,
            Category::Slashed(res, _, arg) => 1 + res.depth().max(arg.depth()),
        }
    }

    /// Peels `n` outermost `(slash, argument)` pairs off the result spine.
    ///
    /// Returns the remaining head and the pairs outermost first, i.e.
    /// `|1 z1, |2 z2, ..., |n zn`.
    pub fn strip(&self, n: usize) -> Option<(&Category, Vec<(SlashDir, &Category)>)> {
        let mut pairs = Vec::with_capacity(n);
        let mut cur = self;
        for _ in 0..n {
            match cur {
                Category::Slashed(res, dir, arg) => {
                    pairs.push((*dir, &**arg));
                    cur = res;
                }
                Category::Atomic(_) => return None,
            }
        }
        Some((cur, pairs))
    }

    /// Inverse of [`Category::strip`]: attaches pairs given outermost first.
    pub fn attach<'a, I>(head: Category, pairs_outermost_first: I) -> Category
    where
        I: IntoIterator<Item = (SlashDir, &'a Category)>,
        I::IntoIter: DoubleEndedIterator,
    {
        pairs_outermost_first
            .into_iter()
            .rev()
            .fold(head, |acc, (dir, arg)| Category::slash(acc, dir, arg.clone()))
    }

    /// Fully parenthesized rendering, mostly for debugging.
    pub fn to_full_string(&self) -> String {
        match self {
            Category::Atomic(a) => a.name().to_string(),
            Category::Slashed(res, dir, arg) => {
                format!("({}{}{})", res.to_full_string(), dir.symbol(), arg.to_full_string())
            }
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Atomic(a) => write!(f, "{a}"),
            Category::Slashed(res, dir, arg) => {
                write!(f, "{res}{}", dir.symbol())?;
                if arg.is_atomic() {
                    write!(f, "{arg}")
                } else {
                    write!(f, "({arg})")
                }
            }
        }
    }
}

impl fmt::Debug for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Category {
    type Err = CategoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_category(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("invalid atom name {0:?}")]
    BadAtom(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// Parses a category expression such as `(N\N)/(S/NP)`.
pub fn parse_category(text: &str) -> Result<Category, CategoryError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let cat = p.category()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(cat)
}

pub fn print_category(c: &Category) -> String {
    c.to_string()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> CategoryError {
        CategoryError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn category(&mut self) -> Result<Category, CategoryError> {
        let mut acc = self.primary()?;
        loop {
            let dir = match self.peek() {
                Some(b'/') => SlashDir::Forward,
                Some(b'\\') => SlashDir::Backward,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let arg = self.primary()?;
            acc = Category::slash(acc, dir, arg);
        }
    }

    fn primary(&mut self) -> Result<Category, CategoryError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.category()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                // The byte range is ASCII by construction.
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Category::atom(name)
            }
            Some(_) => Err(self.error("expected an atom or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
