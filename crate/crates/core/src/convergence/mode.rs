use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::indexsets::{EpSet, IndexDomain};

/// A convergence mode.
///
/// `Base(I)` is plain `I`-convergence. `Sup(I, m)` is the witness scheme
/// over `m`: some `M ∈ I*` makes the function padded with the limit off `M`
/// converge in mode `m`. So `Sup(I, Base(K))` is `I^K`, and the star of an
/// ideal is `Sup(I, Base(Fin))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Mode {
    Base(Ideal),
    Sup(Ideal, Box<Mode>),
}

impl Mode {
    pub fn base(i: Ideal) -> Mode {
        Mode::Base(i)
    }

    pub fn sup(i: Ideal, inner: Mode) -> Result<Mode> {
        i.domain().check_same(inner.domain())?;
        Ok(Mode::Sup(i, Box::new(inner)))
    }

    /// `I^K`.
    pub fn ik(i: Ideal, k: Ideal) -> Result<Mode> {
        Mode::sup(i, Mode::Base(k))
    }

    /// `I*`; only meaningful on ω.
    pub fn star(i: Ideal) -> Result<Mode> {
        if i.domain().is_finite() {
            return Err(Error::StarOnFiniteDomain);
        }
        Mode::sup(i, Mode::Base(Ideal::fin()))
    }

    /// `I ∪ K`: plain convergence in the join.
    pub fn union(i: &Ideal, k: &Ideal) -> Result<Mode> {
        Ok(Mode::Base(i.join(k)?))
    }

    /// `(I ∪ K)*`.
    pub fn union_star(i: &Ideal, k: &Ideal) -> Result<Mode> {
        Mode::star(i.join(k)?)
    }

    pub fn domain(&self) -> IndexDomain {
        match self {
            Mode::Base(i) | Mode::Sup(i, _) => i.domain(),
        }
    }

    /// The ideals of the `Sup` nodes, outermost first.
    pub fn witness_ideals(&self) -> Vec<&Ideal> {
        let mut out = Vec::new();
        let mut m = self;
        while let Mode::Sup(i, inner) = m {
            out.push(i);
            m = inner;
        }
        out
    }

    /// The ideal at the bottom of the chain.
    pub fn base_ideal(&self) -> &Ideal {
        match self {
            Mode::Base(i) => i,
            Mode::Sup(_, inner) => inner.base_ideal(),
        }
    }

    /// Join of every ideal in the mode.
    ///
    /// On a finite space, `f` converges to `x` in the mode iff the bad set of
    /// the minimal neighborhood of `x` lies in this ideal. For `Sup(I, m)`:
    /// the bad set of the padded function is `B ∩ M`, and `M` can be taken
    /// as large as the complement of `I`'s grand union, so the inner mode
    /// sees `B` minus that union. Unrolling the recursion joins everything.
    pub fn effective_ideal(&self) -> Ideal {
        match self {
            Mode::Base(i) => i.clone(),
            Mode::Sup(i, inner) => i
                .join(&inner.effective_ideal())
                .expect("mode domains agree"),
        }
    }

    /// Grand union of the effective ideal, without collecting generators.
    pub(crate) fn effective_union(&self) -> EpSet {
        match self {
            Mode::Base(i) => i.grand_union().clone(),
            Mode::Sup(i, inner) => i.grand_union() | &inner.effective_union(),
        }
    }
}

impl fmt::Debug for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Base(i) => write!(f, "{i}"),
            Mode::Sup(i, inner) => write!(f, "{i}^({inner:?})"),
        }
    }
}

/// Named ideals for parsing mode strings such as `I^K*` or `(IuK)*`.
#[derive(Debug, Clone)]
pub struct IdealEnv {
    domain: IndexDomain,
    ideals: BTreeMap<String, Ideal>,
}

impl IdealEnv {
    pub fn new(domain: IndexDomain) -> IdealEnv {
        IdealEnv {
            domain,
            ideals: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, ideal: Ideal) -> Result<IdealEnv> {
        self.insert(name, ideal)?;
        Ok(self)
    }

    pub fn insert(&mut self, name: &str, ideal: Ideal) -> Result<()> {
        self.domain.check_same(ideal.domain())?;
        self.ideals.insert(name.to_string(), ideal);
        Ok(())
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn get(&self, name: &str) -> Result<&Ideal> {
        self.ideals
            .get(name)
            .ok_or_else(|| Error::UnknownIdeal(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Ideal)> {
        self.ideals.iter()
    }

    fn lookup(&self, name: &str) -> Result<Ideal> {
        match name {
            "Fin" | "I0" if !self.ideals.contains_key(name) => {
                if self.domain.is_finite() {
                    Err(Error::StarOnFiniteDomain)
                } else {
                    Ok(Ideal::fin())
                }
            }
            _ => self.get(name).cloned(),
        }
    }

    /// Parses a mode string.
    ///
    /// ```text
    /// mode  := prim [ '*' ] | prim '^' mode
    /// prim  := ideal ( ('u' | '∪') ideal )*  |  '(' mode ')'
    /// ideal := 'Fin' | 'I0' | [A-Z][0-9]*
    /// ```
    ///
    /// `^` associates to the right, so `I^K*` is `I^(K*)`. A starred or
    /// exponentiated primary must denote a single ideal.
    pub fn parse_mode(&self, input: &str) -> Result<Mode> {
        let mut p = Parser {
            env: self,
            input,
            chars: input
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
        };
        let m = p.mode()?;
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(m)
    }
}

struct Parser<'a> {
    env: &'a IdealEnv,
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, msg: &str) -> Error {
        let pos = self
            .chars
            .get(self.pos)
            .map_or(self.input.len(), |&(i, _)| i);
        Error::ModeSyntax {
            input: self.input.to_string(),
            pos,
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn mode(&mut self) -> Result<Mode> {
        let start = self.pos;
        let prim = self.primary()?;
        if self.eat('*') {
            let i = self.as_ideal(prim, start)?;
            return Mode::star(i);
        }
        if self.eat('^') {
            let i = self.as_ideal(prim, start)?;
            let inner = self.mode()?;
            return Mode::sup(i, inner);
        }
        Ok(prim)
    }

    fn as_ideal(&self, m: Mode, start: usize) -> Result<Ideal> {
        match m {
            Mode::Base(i) => Ok(i),
            Mode::Sup(..) => {
                let pos = self.chars.get(start).map_or(0, |&(i, _)| i);
                Err(Error::ModeSyntax {
                    input: self.input.to_string(),
                    pos,
                    msg: "expected an ideal, found a compound mode".into(),
                })
            }
        }
    }

    fn primary(&mut self) -> Result<Mode> {
        if self.eat('(') {
            let m = self.mode()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(m);
        }
        let mut ideal = self.ideal()?;
        while matches!(self.peek(), Some('u') | Some('∪')) {
            self.pos += 1;
            let next = self.ideal()?;
            ideal = ideal.join(&next)?;
        }
        Ok(Mode::Base(ideal))
    }

    fn ideal(&mut self) -> Result<Ideal> {
        let rest: String = self.chars[self.pos..].iter().map(|&(_, c)| c).collect();
        let name_len = if rest.starts_with("Fin") {
            3
        } else {
            match rest.chars().next() {
                Some(c) if c.is_ascii_uppercase() => {
                    1 + rest[1..].chars().take_while(|c| c.is_ascii_digit()).count()
                }
                _ => return Err(self.error("expected an ideal name")),
            }
        };
        let name = &rest[..name_len];
        let ideal = self.env.lookup(name).map_err(|e| match e {
            Error::UnknownIdeal(_) => self.error(&format!("unknown ideal {name:?}")),
            e => e,
        })?;
        self.pos += name_len;
        Ok(ideal)
    }
}
