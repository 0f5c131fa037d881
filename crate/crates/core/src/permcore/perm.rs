//! Permutations on {0,...,n-1} stored as image sequences.
//!
//! Points act on the right: `i^g = g.apply(i)`, and `compose(a, b)` applies
//! `a` first. Both the image-list format `[2,0,1]` and cycle notation
//! `(0 1 2)(3 4)` are parsed and emitted; the degree is always explicit.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

use super::PermError;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u32>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({})", self.cycle_string())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Build from an image sequence, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Perm, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x as usize >= n || seen[x as usize] {
                return Err(PermError::NotABijection);
            }
            seen[x as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Build from disjoint-or-not cycles over a fixed degree.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Perm, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cyc in cycles {
            for i in 0..cyc.len() {
                let from = cyc[i] as usize;
                let to = cyc[(i + 1) % cyc.len()];
                if from >= degree || to as usize >= degree {
                    return Err(PermError::PointOutOfRange);
                }
                images[from] = to;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`: `i^(a*b) = (i^a)^b`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// In-place variant of `compose`, writing into `out`.
    pub fn compose_into(&self, other: &Perm, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.images.iter().map(|&x| other.images[x as usize]));
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[x as usize];
        }
        Perm { images }
    }

    pub fn pow(&self, mut e: i64) -> Perm {
        let mut base = if e < 0 {
            e = -e;
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = Perm::identity(self.degree());
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn fixed_point_count(&self) -> u64 {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 == x)
            .count() as u64
    }

    /// Cycle lengths including fixed points.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Multiset of nontrivial cycle lengths, sorted; a conjugacy invariant.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycle_lengths().into_iter().filter(|&l| l > 1).collect();
        t.sort_unstable();
        t
    }

    /// Element order as lcm of cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for l in self.cycle_lengths() {
            acc = acc.lcm(&BigUint::from(l));
        }
        acc
    }

    /// Element order when it fits in u64 (always true for our domains).
    pub fn order_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for l in self.cycle_lengths() {
            let l = l as u64;
            let g = acc.gcd(&l);
            acc = acc.checked_mul(l / g)?;
        }
        Some(acc)
    }

    pub fn is_even(&self) -> bool {
        let n = self.degree();
        let cycles = self.cycle_lengths().len();
        (n - cycles) % 2 == 0
    }

    /// Nontrivial cycles in canonical order (each led by its least point).
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cyc.push(cur as u32);
                cur = self.images[cur] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn image_string(&self) -> String {
        let inner: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        format!("[{}]", inner.join(","))
    }

    /// Parse either cycle notation or an image list; degree must be given.
    pub fn parse(text: &str, degree: usize) -> Result<Perm, PermError> {
        let t = text.trim();
        if t.starts_with('[') {
            Perm::parse_images(t, degree)
        } else {
            Perm::parse_cycles(t, degree)
        }
    }

    pub fn parse_images(text: &str, degree: usize) -> Result<Perm, PermError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| PermError::Parse(text.to_string()))?;
        let images: Result<Vec<u32>, _> = inner
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect();
        let images = images.map_err(|_| PermError::Parse(text.to_string()))?;
        if images.len() != degree {
            return Err(PermError::Parse(format!(
                "expected degree {degree}, got {}",
                images.len()
            )));
        }
        Perm::from_images(images)
    }

    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, PermError> {
        let t = text.trim();
        if t == "()" || t.is_empty() {
            return Ok(Perm::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| PermError::Parse(t.to_string()))?;
            let close = rest.find(')').ok_or_else(|| PermError::Parse(t.to_string()))?;
            if close < open {
                return Err(PermError::Parse(t.to_string()));
            }
            let inner = &rest[open + 1..close];
            let pts: Result<Vec<u32>, _> = inner
                .split(|c: char| c == ' ' || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>())
                .collect();
            let pts = pts.map_err(|_| PermError::Parse(t.to_string()))?;
            if !pts.is_empty() {
                cycles.push(pts);
            }
            rest = &rest[close + 1..];
            rest = rest.trim_start();
        }
        Perm::from_cycles(degree, &cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let a = Perm::parse_cycles("(0 1 2)", 4).unwrap();
        let b = Perm::parse_cycles("(2 3)", 4).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.apply(1), 3); // 1^a = 2, 2^b = 3
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.conjugate_by(&b), b.inverse().compose(&a).compose(&b));
    }

    #[test]
    fn parse_roundtrip() {
        let p = Perm::parse("(0 1 2)(3 4)", 6).unwrap();
        assert_eq!(p.cycle_string(), "(0 1 2)(3 4)");
        let q = Perm::parse("[1,2,0,4,3,5]", 6).unwrap();
        assert_eq!(p, q);
        assert_eq!(Perm::parse("()", 3).unwrap(), Perm::identity(3));
        assert!(Perm::parse("[0,0,1]", 3).is_err());
        assert!(Perm::parse("(0 9)", 3).is_err());
    }

    #[test]
    fn orders_and_parity() {
        let p = Perm::parse("(0 1 2)(3 4)", 6).unwrap();
        assert_eq!(p.order_u64(), Some(6));
        assert_eq!(p.order(), BigUint::from(6u32));
        assert!(!Perm::parse("(0 1)", 4).unwrap().is_even());
        assert!(Perm::parse("(0 1 2)", 4).unwrap().is_even());
        assert_eq!(p.fixed_point_count(), 1);
        assert_eq!(p.cycle_type(), vec![2, 3]);
    }

    #[test]
    fn pow() {
        let c = Perm::parse("(0 1 2 3 4)", 5).unwrap();
        assert_eq!(c.pow(5), Perm::identity(5));
        assert_eq!(c.pow(-1), c.inverse());
        assert_eq!(c.pow(3), c.compose(&c).compose(&c));
    }
}
