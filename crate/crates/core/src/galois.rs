//! Arithmetic in binary extension fields `F_{2^s}` and in the polynomial
//! ring `F_q[Y]` over them.
//!
//! Field elements are stored as the bit pattern of a binary polynomial of
//! degree `< s`; addition is XOR and multiplication is a carry-less product
//! reduced by the field modulus. Polynomials keep their coefficients lowest
//! degree first and are always canonical (no trailing zero coefficient).

use thiserror::Error;

/// Largest supported extension degree `s` (field order `2^16`).
pub const MAX_FIELD_BITS: u32 = 16;

/// Largest search space `q^deg` accepted by [`FieldSpec::find_irreducible`].
pub const IRREDUCIBLE_SEARCH_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("field degree s={0} outside supported range 1..=16")]
    DegreeOutOfRange(u32),
    #[error("element {value} is not in a field of order {order}")]
    ElementOutOfRange { value: u32, order: u32 },
    #[error("modulus polynomial must be monic of degree >= 1")]
    BadModulus,
    #[error("polynomial degree must be >= 1")]
    ZeroDegree,
    #[error("irreducible search over {q}^{deg} candidates exceeds the 2^24 guard")]
    SearchGuard { q: u32, deg: u32 },
    #[error("no irreducible polynomial of degree {0} found")]
    NotFound(u32),
}

pub type Result<T> = std::result::Result<T, GaloisError>;

/// An element of `F_q`, as the integer encoding of its binary polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

/// The field `F_{2^s}` defined by an irreducible binary modulus of degree `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    s: u32,
    modulus: u32,
}

/// Trial-division irreducibility test for a binary polynomial given as a bit mask.
fn is_irreducible_gf2(mask: u32) -> bool {
    let deg = 31 - mask.leading_zeros();
    if deg == 0 {
        return false;
    }
    // any factor of degree <= deg/2 has a mask below 2^(deg/2 + 1)
    for divisor in 2u32..(1u32 << (deg / 2 + 1)) {
        if gf2_rem(mask, divisor) == 0 {
            return false;
        }
    }
    true
}

fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 {
        let da = 31 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

impl FieldSpec {
    /// Builds `F_{2^s}` using the smallest irreducible modulus of degree `s`.
    pub fn new(s: u32) -> Result<Self> {
        if !(1..=MAX_FIELD_BITS).contains(&s) {
            return Err(GaloisError::DegreeOutOfRange(s));
        }
        let modulus = ((1u32 << s)..(1u32 << (s + 1)))
            .find(|&m| is_irreducible_gf2(m))
            .expect("an irreducible polynomial exists in every degree");
        Ok(FieldSpec { s, modulus })
    }

    /// Field with `q` elements; `q` must be a power of two in `2..=2^16`.
    pub fn with_order(q: u32) -> Result<Self> {
        if !q.is_power_of_two() || q < 2 {
            return Err(GaloisError::DegreeOutOfRange(0));
        }
        Self::new(q.trailing_zeros())
    }

    pub fn bits(&self) -> u32 {
        self.s
    }

    /// The defining modulus as an `(s+1)`-bit mask.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.s
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value < self.order() {
            Ok(FieldElem(value))
        } else {
            Err(GaloisError::ElementOutOfRange { value, order: self.order() })
        }
    }

    /// Iterates over every field element in increasing value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order()).map(FieldElem)
    }

    fn check(&self, a: FieldElem) -> Result<()> {
        self.elem(a.0).map(|_| ())
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (mut a, mut b) = (a.0, b.0);
        let mut prod = 0u32;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        let s = self.s;
        let mut bit = 2 * s;
        while bit > s {
            bit -= 1;
            if prod & (1 << bit) != 0 {
                prod ^= self.modulus << (bit - s);
            }
        }
        FieldElem(prod)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(acc, base);
            }
            base = self.mul_unchecked(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, u64::from(self.order()) - 2))
        }
    }

    /// Horner evaluation of `f` at `y`.
    pub fn poly_eval(&self, f: &Poly, y: FieldElem) -> Result<FieldElem> {
        self.check(y)?;
        for &c in &f.coeffs {
            self.check(c)?;
        }
        Ok(self.eval_unchecked(f, y))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, f: &Poly, y: FieldElem) -> FieldElem {
        f.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| self.mul_unchecked(acc, y) + c)
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + self.mul_unchecked(x, y);
            }
        }
        Poly::new(out)
    }

    /// Remainder of `a` modulo a nonzero `b` (any leading coefficient).
    pub fn poly_rem(&self, a: &Poly, b: &Poly) -> Poly {
        let lead = *b.coeffs.last().expect("division by the zero polynomial");
        let lead_inv = self.inv(lead).expect("nonzero leading coefficient");
        let db = b.coeffs.len() - 1;
        let mut rem = a.coeffs.clone();
        while rem.len() > db {
            let top = *rem.last().unwrap();
            if !top.is_zero() {
                let factor = self.mul_unchecked(top, lead_inv);
                let shift = rem.len() - 1 - db;
                for (j, &c) in b.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j] + self.mul_unchecked(factor, c);
                }
            }
            rem.pop();
        }
        Poly::new(rem)
    }

    pub fn poly_gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        x.into_monic(self)
    }

    /// `f^e mod modulus` by square-and-multiply. `modulus` must be monic of degree >= 1.
    pub fn poly_mod_pow(&self, f: &Poly, mut e: u64, modulus: &Poly) -> Result<Poly> {
        if modulus.degree().unwrap_or(0) == 0 || !modulus.is_monic() {
            return Err(GaloisError::BadModulus);
        }
        let mut base = self.poly_rem(f, modulus);
        let mut acc = self.poly_rem(&Poly::one(), modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_rem(&self.poly_mul(&acc, &base), modulus);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_rem(&self.poly_mul(&base, &base), modulus);
            }
        }
        Ok(acc)
    }

    /// Ben-Or test: a monic `f` of degree `n` is irreducible iff
    /// `gcd(f, Y^{q^i} - Y) = 1` for every `1 <= i <= n/2`.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let n = match f.degree() {
            Some(n) if n >= 1 => n,
            _ => return false,
        };
        let f = f.clone().into_monic(self);
        let y = Poly::monomial(1);
        let mut power = y.clone();
        for _ in 0..n / 2 {
            power = self
                .poly_mod_pow(&power, u64::from(self.order()), &f)
                .expect("monic modulus");
            let diff = power.add(&y);
            if self.poly_gcd(&f, &diff).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// The smallest monic irreducible polynomial of degree `deg`, ordering
    /// candidates by their coefficients from the highest degree down.
    pub fn find_irreducible(&self, deg: u32) -> Result<Poly> {
        if deg == 0 {
            return Err(GaloisError::ZeroDegree);
        }
        let q = u64::from(self.order());
        let space = q
            .checked_pow(deg)
            .filter(|&v| v <= IRREDUCIBLE_SEARCH_LIMIT)
            .ok_or(GaloisError::SearchGuard { q: self.order(), deg })?;
        let deg = deg as usize;
        for idx in 0..space {
            let mut coeffs = Vec::with_capacity(deg + 1);
            let mut rest = idx;
            for _ in 0..deg {
                coeffs.push(FieldElem((rest % q) as u32));
                rest /= q;
            }
            coeffs.push(FieldElem::ONE);
            let candidate = Poly::new(coeffs);
            if self.is_irreducible(&candidate) {
                return Ok(candidate);
            }
        }
        Err(GaloisError::NotFound(deg as u32))
    }
}

/// A polynomial over `F_q`, coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_values(values: &[u32]) -> Self {
        Self::new(values.iter().map(|&v| FieldElem(v)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FieldElem::ONE] }
    }

    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; deg + 1];
        coeffs[deg] = FieldElem::ONE;
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FieldElem::ONE)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        Poly::new((0..len).map(|i| get(self, i) + get(other, i)).collect())
    }

    fn into_monic(self, field: &FieldSpec) -> Poly {
        match self.coeffs.last() {
            Some(&lead) if lead != FieldElem::ONE => {
                let inv = field.inv(lead).expect("nonzero lead");
                Poly::new(self.coeffs.iter().map(|&c| field.mul_unchecked(c, inv)).collect())
            }
            _ => self,
        }
    }
}
