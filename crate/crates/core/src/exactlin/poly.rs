//! Dense univariate polynomials and root finding in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rat::Rat;
use super::scalar::{Field, Scalar};
use super::ExactError;

/// Polynomial with coefficients from low to high degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn x_minus(field: Field, root: &Scalar) -> Self {
        Self::new(field, vec![-root, field.one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(self.field, vec![]);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let out = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        Poly::new(self.field, out)
    }

    /// Quotient and remainder; panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::new(self.field, vec![]), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &(&c * d);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero");
                Poly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::new(self.field, vec![self.field.one()]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

/// Roots of `p` in its base field with multiplicities, plus the degree of the
/// factor without roots in the field. Roots are returned in ascending order
/// (as rationals, or as canonical residues).
pub fn roots_in_field(p: &Poly) -> Result<(Vec<(Scalar, usize)>, usize), ExactError> {
    let mut rest = p.monic();
    let mut found = Vec::new();
    let candidates = match p.field {
        Field::Rational => rational_root_candidates(&rest)?,
        Field::Prime(q) => prime_field_roots(&rest, q),
    };
    for r in candidates {
        let mut mult = 0;
        loop {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let (quot, rem) = rest.div_rem(&Poly::x_minus(p.field, &r));
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            mult += 1;
        }
        if mult > 0 {
            found.push((r, mult));
        }
    }
    found.sort_by(|a, b| compare_scalars(&a.0, &b.0));
    Ok((found, rest.degree().unwrap_or(0)))
}

pub(crate) fn compare_scalars(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    match (a, b) {
        (Scalar::Q(x), Scalar::Q(y)) => x.sub(y).signum(),
        (Scalar::Fp { value: x, .. }, Scalar::Fp { value: y, .. }) => x.cmp(y),
        _ => panic!("comparing scalars of different fields"),
    }
}

/// Candidate rational roots `±u/v` with `u | a_0` and `v | a_n` after clearing denominators.
fn rational_root_candidates(p: &Poly) -> Result<Vec<Scalar>, ExactError> {
    let mut out = vec![Scalar::Q(Rat::zero())];
    let Some(_) = p.degree() else { return Ok(out) };
    let rats: Vec<Rat> = p.coeffs.iter().map(|c| c.as_rational().expect("rational field").clone()).collect();
    let mut lcm = BigInt::one();
    for r in &rats {
        lcm = lcm.lcm(&r.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let Some(low) = ints.iter().find(|c| !c.is_zero()) else { return Ok(out) };
    let high = ints.last().expect("nonempty");
    let too_big = || ExactError::Invalid("polynomial coefficients too large for rational root search".into());
    let low = low.abs().to_u64().ok_or_else(too_big)?;
    let high = high.abs().to_u64().ok_or_else(too_big)?;
    let nums = divisors(low).ok_or_else(too_big)?;
    let dens = divisors(high).ok_or_else(too_big)?;
    for &u in &nums {
        for &v in &dens {
            if u.gcd(&v) != 1 {
                continue;
            }
            for s in [1i128, -1] {
                let q = Rat::from_big(num_rational::BigRational::new(
                    BigInt::from(s * u as i128),
                    BigInt::from(v),
                ));
                out.push(Scalar::Q(q));
            }
        }
    }
    Ok(out)
}

/// Positive divisors by trial division; refuses inputs whose square root is too large to scan.
fn divisors(n: u64) -> Option<Vec<u64>> {
    if n > (1u64 << 48) {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Distinct roots in `F_q`: exhaustive for small `q`, otherwise equal-degree splitting
/// of `gcd(f, x^q - x)` with a fixed-seed generator.
fn prime_field_roots(f: &Poly, q: u64) -> Vec<Scalar> {
    let field = Field::Prime(q);
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    if q < (1 << 16) {
        return (0..q).map(|v| field.from_i64(v as i64)).filter(|x| f.eval(x).is_zero()).collect();
    }
    let x = Poly::new(field, vec![field.zero(), field.one()]);
    let xq = x.pow_mod(q, f);
    let g = f.gcd(&xq.sub(&x));
    let mut roots = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    split_linear_factors(&g, q, &mut rng, &mut roots);
    roots
}

fn split_linear_factors(g: &Poly, q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    let field = Field::Prime(q);
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-&g.monic().coeffs[0]),
        Some(_) => loop {
            let a = field.from_i64(rng.gen_range(0..q) as i64);
            let shifted = Poly::new(field, vec![a, field.one()]);
            let h = shifted.pow_mod((q - 1) / 2, g).sub(&Poly::new(field, vec![field.one()]));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap_or(0) {
                let (other, _) = g.div_rem(&d);
                split_linear_factors(&d, q, rng, out);
                split_linear_factors(&other.monic(), q, rng, out);
                return;
            }
        },
    }
}
