//! Symbolic graph patterns for bound expressions.
//!
//! A pattern names a small graph family member without materializing it:
//! complete `K_a`, near-complete `J_k` (a clique minus one edge), complete
//! multipartite, Turán, cycles, the named figure graphs, joins and
//! lexicographic products.  Patterns normalize to a canonical form so that
//! different spellings of the same graph (for instance `K4`, `Kmp(1,1,1,1)`
//! and `Turan(4,4)`) compare equal: everything complete multipartite
//! collapses to a descending part list, and joins and products of
//! multipartite pieces are folded in.
//!
//! The textual grammar, used by the CLI:
//!
//! ```text
//! pattern := term ('+' term)*            join
//! term    := atom ('[' pattern ']')*     lexicographic product
//! atom    := K<n> | J<n> | C<n> | E<n> | <n> | Kmp(n,...) | Turan(n,s)
//!          | named:<id> | '(' pattern ')'
//! ```
//!
//! A bare integer means the complete graph of that order.

use crate::constructions::{figure_graph, FigureId};
use crate::graph::{self, contains_subgraph, Graph, SUBGRAPH_PATTERN_MAX};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pattern {
    /// Complete multipartite with the given part sizes (canonical:
    /// descending).  Subsumes complete (`all parts 1`), empty (`one part`)
    /// and near-complete (`2,1,...,1`) graphs.
    Kmp(Vec<usize>),
    /// Cycle on `n >= 5` vertices (shorter cycles normalize to `Kmp`).
    Cycle(usize),
    /// A graph built into this crate by name (`Ga`, `Gb`).
    Named(String),
    /// Join of the two operands.
    Join(Box<Pattern>, Box<Pattern>),
    /// Lexicographic product: first operand's vertices blown up by the
    /// second.
    Product(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    pub fn complete(a: usize) -> Pattern {
        Pattern::Kmp(vec![1; a])
    }

    /// `J_k`: complete graph minus one edge.
    pub fn near_complete(k: usize) -> Pattern {
        debug_assert!(k >= 2);
        let mut parts = vec![1; k - 1];
        parts[0] = 2;
        Pattern::Kmp(parts)
    }

    /// Empty graph on `t` vertices.
    pub fn empty(t: usize) -> Pattern {
        Pattern::Kmp(vec![t])
    }

    pub fn turan(n: usize, s: usize) -> Result<Pattern> {
        if n == 0 || s == 0 {
            return Err(Error::invalid("Turan pattern needs n >= 1, s >= 1"));
        }
        let q = n / s;
        let r = n % s;
        let mut parts = Vec::new();
        parts.extend(std::iter::repeat_n(q + 1, r));
        parts.extend(std::iter::repeat_n(q, s - r));
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Pattern::Kmp(parts))
    }

    pub fn cycle(n: usize) -> Result<Pattern> {
        match n {
            0..=2 => Err(Error::invalid("cycle pattern needs n >= 3")),
            3 => Ok(Pattern::complete(3)),
            4 => Ok(Pattern::Kmp(vec![2, 2])),
            _ => Ok(Pattern::Cycle(n)),
        }
    }

    /// Canonical form: sorted part lists, multipartite joins and products
    /// folded into a single `Kmp`, operands ordered.
    pub fn normalize(&self) -> Pattern {
        match self {
            Pattern::Kmp(parts) => {
                let mut p = parts.clone();
                p.sort_unstable_by(|a, b| b.cmp(a));
                Pattern::Kmp(p)
            }
            Pattern::Cycle(n) => Pattern::cycle(*n).unwrap_or(Pattern::Cycle(*n)),
            Pattern::Named(s) => Pattern::Named(s.clone()),
            Pattern::Join(a, b) => {
                let (na, nb) = (a.normalize(), b.normalize());
                match (na, nb) {
                    (Pattern::Kmp(mut x), Pattern::Kmp(y)) => {
                        x.extend(y);
                        x.sort_unstable_by(|a, b| b.cmp(a));
                        Pattern::Kmp(x)
                    }
                    (na, nb) => {
                        // Join commutes; order operands canonically.
                        if na <= nb {
                            Pattern::Join(Box::new(na), Box::new(nb))
                        } else {
                            Pattern::Join(Box::new(nb), Box::new(na))
                        }
                    }
                }
            }
            Pattern::Product(a, b) => {
                let (na, nb) = (a.normalize(), b.normalize());
                if let Pattern::Kmp(parts) = &nb {
                    if parts == &[1] {
                        return na;
                    }
                }
                match (&na, &nb) {
                    // K_p[H] is the join of p copies of H, so a multipartite
                    // H folds into one part list repeated p times.
                    (Pattern::Kmp(outer), Pattern::Kmp(inner))
                        if outer.iter().all(|&p| p == 1) =>
                    {
                        let mut parts: Vec<usize> = inner
                            .iter()
                            .copied()
                            .cycle()
                            .take(inner.len() * outer.len())
                            .collect();
                        parts.sort_unstable_by(|a, b| b.cmp(a));
                        Pattern::Kmp(parts)
                    }
                    _ => {
                        if let Pattern::Kmp(outer) = &na {
                            if outer == &[1] {
                                return nb;
                            }
                        }
                        Pattern::Product(Box::new(na), Box::new(nb))
                    }
                }
            }
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Pattern::Kmp(parts) => parts.iter().sum(),
            Pattern::Cycle(n) => *n,
            Pattern::Named(_) => self
                .to_graph()
                .map(|g| g.order())
                .unwrap_or(0),
            Pattern::Join(a, b) => a.order() + b.order(),
            Pattern::Product(a, b) => a.order() * b.order(),
        }
    }

    /// Clique number, computed structurally where the shape determines it
    /// and from the concrete graph otherwise.
    pub fn clique_number(&self) -> Result<usize> {
        match self {
            Pattern::Kmp(parts) => Ok(parts.len()),
            Pattern::Cycle(n) => Ok(if *n == 3 { 3 } else { 2 }),
            Pattern::Named(_) => Ok(graph::clique_number(&self.to_graph()?)),
            Pattern::Join(a, b) => Ok(a.clique_number()? + b.clique_number()?),
            Pattern::Product(a, b) => {
                let na = a.normalize();
                match &na {
                    // K_p[H]: p disjoint cliques of H joined completely.
                    Pattern::Kmp(outer) if outer.iter().all(|&p| p == 1) => {
                        Ok(outer.len() * b.clique_number()?)
                    }
                    // E_t[H]: disjoint copies of H.
                    Pattern::Kmp(outer) if outer.len() == 1 => b.clique_number(),
                    _ => Err(Error::invalid(format!(
                        "clique number of pattern {self} is not structurally determined"
                    ))),
                }
            }
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        match self {
            Pattern::Kmp(parts) => {
                let mut p = parts.clone();
                p.sort_unstable_by(|a, b| b.cmp(a));
                graph::complete_multipartite(&p)
            }
            Pattern::Cycle(n) => graph::cycle(*n),
            Pattern::Named(s) => match s.as_str() {
                "Ga" => Ok(figure_graph(FigureId::Ga)),
                "Gb" => Ok(figure_graph(FigureId::Gb)),
                other => Err(Error::invalid(format!(
                    "unknown named pattern `{other}` (known: Ga, Gb)"
                ))),
            },
            Pattern::Join(a, b) => graph::join(&a.to_graph()?, &b.to_graph()?),
            Pattern::Product(a, b) => graph::lex_product(&a.to_graph()?, &b.to_graph()?),
        }
    }

    /// Whether this pattern embeds in `other` as a subgraph.  Exact for
    /// pairs of multipartite patterns at any size and for concrete pairs
    /// with a small left side; conservatively `false` otherwise.
    pub fn subgraph_of(&self, other: &Pattern) -> bool {
        let lo = self.normalize();
        let hi = other.normalize();
        if lo == hi {
            return true;
        }
        if let (Pattern::Kmp(a), Pattern::Kmp(b)) = (&lo, &hi) {
            return kmp_embeds(a, b);
        }
        if lo.order() <= SUBGRAPH_PATTERN_MAX {
            if let (Ok(lg), Ok(hg)) = (lo.to_graph(), hi.to_graph()) {
                if let Ok(hit) = contains_subgraph(&hg, &lg) {
                    return hit.is_some();
                }
            }
        }
        false
    }
}

/// Decides `Kmp(small) ⊆ Kmp(big)` exactly.  Vertices in different parts of
/// the pattern must stay adjacent, so distinct parts need disjoint sets of
/// host parts; a single part may spread over several host parts (its
/// non-edges need not be preserved).  Feasibility is a small search: give
/// each pattern part a dedicated group of host parts whose sizes cover it.
fn kmp_embeds(small: &[usize], big: &[usize]) -> bool {
    fn place(needs: &mut [usize], hosts: &[usize], i: usize) -> bool {
        if needs.iter().all(|&n| n == 0) {
            return true;
        }
        if i == hosts.len() || hosts[i..].iter().sum::<usize>() < needs.iter().sum::<usize>() {
            return false;
        }
        let q = hosts[i];
        let mut tried: Vec<usize> = Vec::new();
        for j in 0..needs.len() {
            let n = needs[j];
            if n == 0 || tried.contains(&n) {
                continue;
            }
            tried.push(n);
            needs[j] = n.saturating_sub(q);
            let ok = place(needs, hosts, i + 1);
            needs[j] = n;
            if ok {
                return true;
            }
        }
        // Leave this host part unused.
        place(needs, hosts, i + 1)
    }
    small.len() <= big.len() && place(&mut small.to_vec(), big, 0)
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pattern::Kmp(parts) => {
                let mut p = parts.clone();
                p.sort_unstable_by(|a, b| b.cmp(a));
                let n: usize = p.iter().sum();
                if p.iter().all(|&x| x == 1) {
                    write!(f, "K{n}")
                } else if p.len() == 1 {
                    write!(f, "E{n}")
                } else if p[0] == 2 && p[1..].iter().all(|&x| x == 1) {
                    write!(f, "J{n}")
                } else {
                    let body = p
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    write!(f, "Kmp({body})")
                }
            }
            Pattern::Cycle(n) => write!(f, "C{n}"),
            Pattern::Named(s) => write!(f, "named:{s}"),
            Pattern::Join(a, b) => write!(f, "{a}+{b}"),
            Pattern::Product(a, b) => write!(f, "{a}[{b}]"),
        }
    }
}

impl serde::Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses the pattern grammar documented at module level.
pub fn parse_pattern(input: &str) -> Result<Pattern> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let pat = p.pattern()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::invalid(format!(
            "trailing input `{}` in pattern `{input}`",
            &input[p.pos..]
        )));
    }
    Ok(pat.normalize())
}

/// Parses a comma-separated pattern list (the `--targets` grammar).  The
/// separator only counts at the top level, so `Kmp(2,2,3),K3` is two
/// patterns.
pub fn parse_pattern_list(input: &str) -> Result<Vec<Pattern>> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let mut out = vec![p.pattern()?];
    loop {
        p.skip_ws();
        match p.src.get(p.pos) {
            Some(b',') => {
                p.pos += 1;
                out.push(p.pattern()?);
            }
            None => break,
            _ => {
                return Err(Error::invalid(format!(
                    "trailing input `{}` in target list `{input}`",
                    &input[p.pos..]
                )))
            }
        }
    }
    Ok(out.iter().map(Pattern::normalize).collect())
}

pub(crate) struct Parser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn skip_ws(&mut self) {
        while self.src.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected `{}` at byte {} of `{}`",
                c as char,
                self.pos,
                String::from_utf8_lossy(self.src)
            )))
        }
    }

    fn lookahead(&mut self, word: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(word.as_bytes())
    }

    pub(crate) fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::invalid(format!(
                "expected a number at byte {start} of `{}`",
                String::from_utf8_lossy(self.src)
            )));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::invalid("number out of range"))
    }

    pub(crate) fn pattern(&mut self) -> Result<Pattern> {
        let mut left = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'+') {
                self.pos += 1;
                let right = self.term()?;
                left = Pattern::Join(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn term(&mut self) -> Result<Pattern> {
        let mut base = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'[') {
                self.pos += 1;
                let inner = self.pattern()?;
                self.eat(b']')?;
                base = Pattern::Product(Box::new(base), Box::new(inner));
            } else {
                return Ok(base);
            }
        }
    }

    fn atom(&mut self) -> Result<Pattern> {
        self.skip_ws();
        if self.lookahead("Kmp(") {
            self.pos += 4;
            let mut parts = vec![self.integer()?];
            loop {
                self.skip_ws();
                if self.peek() == Some(b',') {
                    self.pos += 1;
                    parts.push(self.integer()?);
                } else {
                    break;
                }
            }
            self.eat(b')')?;
            if parts.contains(&0) {
                return Err(Error::invalid("Kmp parts must be positive"));
            }
            return Ok(Pattern::Kmp(parts));
        }
        if self.lookahead("Turan(") {
            self.pos += 6;
            let n = self.integer()?;
            self.eat(b',')?;
            let s = self.integer()?;
            self.eat(b')')?;
            return Pattern::turan(n, s);
        }
        if self.lookahead("named:") {
            self.pos += 6;
            let start = self.pos;
            while self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
            {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(Error::invalid("empty name after `named:`"));
            }
            let name = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .to_string();
            return Ok(Pattern::Named(name));
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.pattern()?;
                self.eat(b')')?;
                Ok(inner)
            }
            Some(b'K') => {
                self.pos += 1;
                let a = self.integer()?;
                if a == 0 {
                    return Err(Error::invalid("K0 is not a pattern"));
                }
                Ok(Pattern::complete(a))
            }
            Some(b'J') => {
                self.pos += 1;
                let k = self.integer()?;
                if k < 2 {
                    return Err(Error::invalid("J patterns need at least 2 vertices"));
                }
                Ok(Pattern::near_complete(k))
            }
            Some(b'C') => {
                self.pos += 1;
                let n = self.integer()?;
                Pattern::cycle(n)
            }
            Some(b'E') => {
                self.pos += 1;
                let t = self.integer()?;
                if t == 0 {
                    return Err(Error::invalid("E0 is not a pattern"));
                }
                Ok(Pattern::empty(t))
            }
            Some(c) if c.is_ascii_digit() => {
                let a = self.integer()?;
                if a == 0 {
                    return Err(Error::invalid("0 is not a pattern"));
                }
                Ok(Pattern::complete(a))
            }
            _ => Err(Error::invalid(format!(
                "unrecognized pattern at byte {} of `{}`",
                self.pos,
                String::from_utf8_lossy(self.src)
            ))),
        }
    }
}
