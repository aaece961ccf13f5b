use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"k"` or `"p/q"` (optionally signed) into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Nonnegative exact vertex costs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CostFn(Vec<Rational>);

impl CostFn {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some((v, c)) = values.iter().enumerate().find(|(_, c)| c.is_negative()) {
            return Err(Error::contract(format!("negative cost {c} on vertex {v}")));
        }
        Ok(CostFn(values))
    }

    pub fn unit(n: usize) -> Self {
        CostFn(vec![int(1); n])
    }

    pub fn from_ints(values: &[u64]) -> Self {
        CostFn(values.iter().map(|&k| Rational::from_integer(BigInt::from(k))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, v: usize) -> &Rational {
        &self.0[v]
    }

    pub fn total(&self, vs: &[usize]) -> Rational {
        vs.iter().fold(Rational::zero(), |acc, &v| acc + &self.0[v])
    }

    pub fn restrict(&self, map: &[usize]) -> CostFn {
        CostFn(map.iter().map(|&v| self.0[v].clone()).collect())
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl fmt::Debug for CostFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|c| c.to_string())).finish()
    }
}
