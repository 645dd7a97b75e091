//! Permutations of a finite point set `{0, .., d-1}`.
//!
//! Points are 0-based inside the library and 1-based in cycle notation.
//! Composition follows `(a * b)(x) = a(b(x))`: the right factor acts first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 16;

/// A bijection of `{0, .., degree-1}`, stored inline.
///
/// The derived ordering is lexicographic on the image sequence for
/// permutations of equal degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    degree: u8,
    images: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity(degree: usize) -> Result<Perm> {
        check_degree(degree)?;
        let mut images = [0u8; MAX_DEGREE];
        for (i, slot) in images.iter_mut().enumerate().take(degree) {
            *slot = i as u8;
        }
        Ok(Perm {
            degree: degree as u8,
            images,
        })
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let degree = images.len();
        check_degree(degree)?;
        let mut seen = [false; MAX_DEGREE];
        let mut out = [0u8; MAX_DEGREE];
        for (i, &x) in images.iter().enumerate() {
            if x >= degree {
                return Err(Error::PointOutOfRange {
                    point: x + 1,
                    degree,
                });
            }
            if seen[x] {
                return Err(Error::MalformedCycle(format!(
                    "image {} occurs twice",
                    x + 1
                )));
            }
            seen[x] = true;
            out[i] = x as u8;
        }
        Ok(Perm {
            degree: degree as u8,
            images: out,
        })
    }

    /// Builds a permutation from 1-based images, as in `[2, 3, 1]`.
    pub fn from_one_based(images: &[usize]) -> Result<Perm> {
        let zero: Vec<usize> = images
            .iter()
            .map(|&x| {
                x.checked_sub(1).ok_or(Error::PointOutOfRange {
                    point: 0,
                    degree: images.len(),
                })
            })
            .collect::<Result<_>>()?;
        Perm::from_images(&zero)
    }

    /// Builds a permutation from disjoint 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..degree).collect();
        check_degree(degree)?;
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::MalformedCycle(format!(
                        "point {} exceeds degree {degree}",
                        x + 1
                    )));
                }
                if used[x] {
                    return Err(Error::MalformedCycle(format!("point {} repeated", x + 1)));
                }
                used[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(&images)
    }

    /// Parses disjoint cycles in 1-based notation, e.g. `(1 2 3)(4,5)`.
    ///
    /// For degree at most 9 a cycle written as a single multi-digit token,
    /// such as `(123)`, is read digit by digit.
    pub fn parse(text: &str, degree: usize) -> Result<Perm> {
        check_degree(degree)?;
        let cycles = parse_cycles(text, degree)?;
        Perm::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        debug_assert!(x < self.degree());
        self.images[x] as usize
    }

    /// Image of a point, with range checking.
    pub fn act(&self, x: usize) -> Result<usize> {
        if x >= self.degree() {
            return Err(Error::PointOutOfRange {
                point: x + 1,
                degree: self.degree(),
            });
        }
        Ok(self.apply(x))
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images[..self.degree()].iter().map(|&x| x as usize)
    }

    /// 1-based image list.
    pub fn one_based(&self) -> Vec<usize> {
        self.images().map(|x| x + 1).collect()
    }

    /// `self * other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.mul(other))
    }

    /// Unchecked `self * other`.
    #[inline]
    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree, other.degree);
        let mut images = [0u8; MAX_DEGREE];
        for (i, slot) in images.iter_mut().enumerate().take(self.degree()) {
            *slot = self.images[other.images[i] as usize];
        }
        Perm {
            degree: self.degree,
            images,
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = [0u8; MAX_DEGREE];
        for i in 0..self.degree() {
            images[self.images[i] as usize] = i as u8;
        }
        Perm {
            degree: self.degree,
            images,
        }
    }

    /// `self * other * self^-1`.
    #[inline]
    pub fn conjugate(&self, other: &Perm) -> Perm {
        self.mul(other).mul(&self.inverse())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.images[i] as usize == i)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at
    /// its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// True when the order is a power of `p` (the identity counts).
    pub fn is_p_element(&self, p: u64) -> bool {
        let mut n = self.order();
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    /// Cycle notation with 1-based points; `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree, self)
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(degree));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Tokenizes cycle notation into 0-based cycles without checking
/// disjointness.
fn parse_cycles(text: &str, degree: usize) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut chars = text.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => break,
            Some('(') => {}
            Some(c) => {
                return Err(Error::MalformedCycle(format!(
                    "unexpected '{c}' outside a cycle in {text:?}"
                )))
            }
        }
        let mut body = String::new();
        let mut closed = false;
        for c in chars.by_ref() {
            match c {
                ')' => {
                    closed = true;
                    break;
                }
                '(' => return Err(Error::MalformedCycle(format!("nested '(' in {text:?}"))),
                _ => body.push(c),
            }
        }
        if !closed {
            return Err(Error::MalformedCycle(format!("unbalanced '(' in {text:?}")));
        }
        let tokens: Vec<&str> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            // "()" denotes the identity
            continue;
        }
        let points: Vec<usize> = if tokens.len() == 1 && degree <= 9 && tokens[0].len() > 1 {
            tokens[0]
                .chars()
                .map(|c| {
                    c.to_digit(10).map(|v| v as usize).ok_or_else(|| {
                        Error::MalformedCycle(format!("non-digit '{c}' in {text:?}"))
                    })
                })
                .collect::<Result<_>>()?
        } else {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::MalformedCycle(format!("bad point {t:?} in {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        if points.len() < 2 {
            return Err(Error::MalformedCycle(format!(
                "cycle of length one in {text:?}"
            )));
        }
        let mut cycle = Vec::with_capacity(points.len());
        for p in points {
            if p == 0 || p > degree {
                return Err(Error::MalformedCycle(format!(
                    "point {p} outside 1..={degree}"
                )));
            }
            cycle.push(p - 1);
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Splits a generator list such as `(123)(456),(14)(25)` at top-level
/// commas and parses each entry.
pub fn parse_generators(text: &str, degree: usize) -> Result<Vec<Perm>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::MalformedCycle(format!("unbalanced ')' in {text:?}")));
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    out.push(current);
    out.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| Perm::parse(s, degree))
        .collect()
}

impl FromStr for Perm {
    type Err = Error;

    /// Parses `degree:cycles`, e.g. `8:(1 2 3)(4 5 6)`.
    fn from_str(s: &str) -> Result<Perm> {
        let (d, cycles) = s
            .split_once(':')
            .ok_or_else(|| Error::MalformedCycle(format!("expected degree:cycles, got {s:?}")))?;
        let degree = d
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::MalformedCycle(format!("bad degree in {s:?}")))?;
        Perm::parse(cycles, degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Perm {
        Perm::parse(s, d).unwrap()
    }

    #[test]
    fn parse_remark_generator() {
        assert_eq!(p("(1 2 3)(4 5 6)", 8).one_based(), vec![2, 3, 1, 5, 6, 4, 7, 8]);
        assert_eq!(p("(123)(456)", 8), p("(1 2 3)(4 5 6)", 8));
        assert_eq!(p("(1,2,3)", 3), p("(1 2 3)", 3));
    }

    #[test]
    fn parse_identity_and_errors() {
        assert!(p("", 5).is_identity());
        assert!(p("()", 5).is_identity());
        assert!(matches!(
            Perm::parse("(1 2)(1 3)", 3),
            Err(Error::MalformedCycle(_))
        ));
        assert!(matches!(Perm::parse("(1 2", 3), Err(Error::MalformedCycle(_))));
        assert!(matches!(Perm::parse("(1 4)", 3), Err(Error::MalformedCycle(_))));
        assert!(matches!(Perm::parse("1 2)", 3), Err(Error::MalformedCycle(_))));
        assert!(matches!(Perm::parse("(10 11)", 12), Ok(_)));
    }

    #[test]
    fn composition_convention() {
        // (12)(13): apply (13) first
        let c = p("(1 2)", 3).compose(&p("(1 3)", 3)).unwrap();
        assert_eq!(c.one_based(), vec![3, 1, 2]);
        assert_eq!(c, p("(1 3 2)", 3));
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
        let a = p("(1 4)(2 5)(3 7)(6 8)", 8);
        assert_eq!(a.act(2).unwrap(), 6);
        assert!(matches!(
            p("(1 2)", 3).compose(&p("(1 2)", 4)),
            Err(Error::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn s3_multiplication_table_matches_function_composition() {
        let elems: Vec<Perm> = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
            .iter()
            .map(|v| Perm::from_images(v).unwrap())
            .collect();
        for a in &elems {
            for b in &elems {
                let ab = a.mul(b);
                for x in 0..3 {
                    assert_eq!(ab.apply(x), a.apply(b.apply(x)));
                }
            }
        }
    }

    #[test]
    fn generator_lists() {
        let gens = parse_generators("(123)(456),(14)(25)(37)(68)", 8).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1].apply(2), 6);
        assert!(parse_generators("", 3).unwrap().is_empty());
        let gens = parse_generators("(1,2,3),(4 5)", 5).unwrap();
        assert_eq!(gens.len(), 2);
    }

    #[test]
    fn display_round_trip() {
        let a = p("(1 3)(2 5 4)", 6);
        assert_eq!(a.to_string(), "(1 3)(2 5 4)");
        assert_eq!(Perm::parse(&a.to_string(), 6).unwrap(), a);
        assert_eq!("6:(1 3)(2 5 4)".parse::<Perm>().unwrap(), a);
        assert_eq!(a.order(), 6);
        assert!(p("(1 2 3 4)", 4).is_p_element(2));
        assert!(!p("(1 2 3)", 4).is_p_element(2));
    }
}
