use std::cmp::Ordering;
use std::fmt;

/// `p^a q^b t^e` in multi-index notation; `p`, `q` have weight 1 and `t`
/// (the Moser variables `tau`) weight 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    p: Vec<u32>,
    q: Vec<u32>,
    t: Vec<u32>,
}

impl Monomial {
    pub fn new(p: Vec<u32>, q: Vec<u32>, t: Vec<u32>) -> Self {
        assert!(p.len() == q.len() && q.len() == t.len(), "exponent vectors of unequal length");
        Monomial { p, q, t }
    }

    pub fn one(d: usize) -> Self {
        Monomial::new(vec![0; d], vec![0; d], vec![0; d])
    }

    fn unit(d: usize, i: usize, which: u8) -> Self {
        let mut m = Monomial::one(d);
        match which {
            0 => m.p[i] = 1,
            1 => m.q[i] = 1,
            _ => m.t[i] = 1,
        }
        m
    }

    pub fn p_var(d: usize, i: usize) -> Self {
        Monomial::unit(d, i, 0)
    }

    pub fn q_var(d: usize, i: usize) -> Self {
        Monomial::unit(d, i, 1)
    }

    pub fn t_var(d: usize, i: usize) -> Self {
        Monomial::unit(d, i, 2)
    }

    /// `tau^e` alone.
    pub fn tau_power(e: Vec<u32>) -> Self {
        let d = e.len();
        Monomial::new(vec![0; d], vec![0; d], e)
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[u32] {
        &self.p
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    /// `|a| + |b| + 2|e|`.
    pub fn weighted_degree(&self) -> u32 {
        self.p.iter().sum::<u32>() + self.q.iter().sum::<u32>() + 2 * self.t.iter().sum::<u32>()
    }

    /// True when the monomial involves some `p_i` or `q_i`.
    pub fn has_qp(&self) -> bool {
        self.p.iter().chain(&self.q).any(|&x| x > 0)
    }

    pub fn has_tau(&self) -> bool {
        self.t.iter().any(|&x| x > 0)
    }

    /// `a = b`: the monomial is a product of `p_i q_i` and `tau`.
    pub fn is_diagonal(&self) -> bool {
        self.p == self.q
    }

    /// `a − b` as a signed vector.
    pub fn resonance_vector(&self) -> Vec<i64> {
        self.p.iter().zip(&self.q).map(|(&a, &b)| i64::from(a) - i64::from(b)).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let add = |x: &[u32], y: &[u32]| x.iter().zip(y).map(|(a, b)| a + b).collect();
        Monomial { p: add(&self.p, &other.p), q: add(&self.q, &other.q), t: add(&self.t, &other.t) }
    }

    /// Lowers one exponent by one, returning the old exponent, or `None` if it is zero.
    pub(crate) fn lower(&self, which: u8, i: usize) -> Option<(u32, Monomial)> {
        let mut m = self.clone();
        let slot = match which {
            0 => &mut m.p[i],
            1 => &mut m.q[i],
            _ => &mut m.t[i],
        };
        if *slot == 0 {
            return None;
        }
        let k = *slot;
        *slot -= 1;
        Some((k, m))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic: weighted degree first, then `p`, `q`, `t`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weighted_degree()
            .cmp(&other.weighted_degree())
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.t.cmp(&other.t))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let mut parts = Vec::new();
        for (name, exps) in [("p", &self.p), ("q", &self.q), ("t", &self.t)] {
            for (i, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = if d == 1 { name.to_string() } else { format!("{name}{}", i + 1) };
                parts.push(if k == 1 { v } else { format!("{v}^{k}") });
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(Monomial::new(vec![3], vec![0], vec![0]).weighted_degree(), 3);
        assert_eq!(Monomial::tau_power(vec![2]).weighted_degree(), 4);
        assert_eq!(Monomial::new(vec![4], vec![1], vec![0]).weighted_degree(), 5);
    }

    #[test]
    fn graded_order() {
        let p3 = Monomial::new(vec![3], vec![0], vec![0]);
        let t = Monomial::tau_power(vec![1]);
        let pq = Monomial::new(vec![1], vec![1], vec![0]);
        assert!(t < p3);
        assert!(t < pq);
        assert_eq!(p3.to_string(), "p^3");
        assert_eq!(Monomial::one(2).to_string(), "1");
        assert_eq!(Monomial::new(vec![1, 0], vec![0, 2], vec![1, 0]).to_string(), "p1 q2^2 t1");
    }
}
