//! Evaluation of lattice invariants and the Weierstrass functions.
//!
//! The lattice is reduced to `omega1 (Z + tau Z)` with `tau` in the fundamental
//! domain. Invariants come from the Eisenstein q-series of `E4` and `E6`;
//! `sigma`, `zeta`, `wp`, `wp'` come from the Jacobi theta function
//! `theta1(w) = 2 sum (-1)^n p^{(n+1/2)^2} sin((2n+1) w)`, `p = e^{i pi tau}`,
//! evaluated after reducing the argument into the centered period cell.

use rug::Float;
use serde::Serialize;

use super::lattice::{BasisMatrix, Lattice};
use crate::arith::bigcomplex::{log10_abs, pi, pow10};
use crate::arith::{BigComplex, PrecisionContext};
use crate::error::{Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// `g2, g3`, discriminant, `j` and the quasi-periods at the lattice basis.
#[derive(Clone, Debug)]
pub struct LatticeInvariants {
    pub g2: BigComplex,
    pub g3: BigComplex,
    pub discriminant: BigComplex,
    pub j: BigComplex,
    pub eta1: BigComplex,
    pub eta2: BigComplex,
    pub lambda1: BigComplex,
    pub lambda2: BigComplex,
}

impl LatticeInvariants {
    /// `|eta1 lambda2 - eta2 lambda1 - 2 pi i|`.
    pub fn legendre_residual(&self) -> Float {
        let bits = self.eta1.prec();
        let two_pi_i = BigComplex::new(Float::new(bits), Float::with_val(bits, pi(bits) * 2u32));
        self.eta1.mul(&self.lambda2).sub(&self.eta2.mul(&self.lambda1)).sub(&two_pi_i).abs()
    }
}

/// Decimal summary used for reports.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    pub g2: String,
    pub g3: String,
    pub discriminant: String,
    pub j: String,
    pub eta1: String,
    pub eta2: String,
    pub legendre_residual: String,
}

/// Theta sums `S_r = sum b_n k^r trig_r(k w)` with `k = 2n + 1` and the
/// derivative signs of `theta1` folded in.
struct ThetaSums {
    s0: BigComplex,
    s1: BigComplex,
    s2: BigComplex,
    s3: BigComplex,
}

/// A lattice prepared for repeated evaluation at one precision.
pub struct Weierstrass {
    ctx: PrecisionContext,
    bits: u32,
    lattice: Lattice,
    /// Reduced basis `omega1, omega2 = omega1 * tau`.
    omega1: BigComplex,
    omega2: BigComplex,
    tau: BigComplex,
    /// Original basis expressed in the reduced one.
    to_reduced: BasisMatrix,
    pi: Float,
    nome: BigComplex,
    /// `b_n = (-1)^n p^{n(n+1)}` for the terms needed inside the reduced cell.
    coeffs: Vec<BigComplex>,
    /// `eta(1)` and `eta(tau)` of `Z + tau Z`.
    eta0_1: BigComplex,
    eta0_tau: BigComplex,
    /// `sum b_n k`, proportional to `theta1'(0)`.
    theta_d: BigComplex,
}

/// `p = e^{i pi tau}`.
fn nome_of(tau: &BigComplex, pi: &Float) -> BigComplex {
    tau.mul_i().mul_real(pi).exp()
}

fn inverse(m: &BasisMatrix) -> BasisMatrix {
    // det = 1
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

impl Weierstrass {
    pub fn new(lattice: &Lattice, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.work_bits();
        let (reduced, m) = lattice.reduce_with_matrix(bits)?;
        let (omega1, omega2) = reduced.basis(bits);
        let tau = omega2.div(&omega1)?;
        let pi = pi(bits);
        let nome = nome_of(&tau, &pi);
        let mut w = Weierstrass {
            ctx: *ctx,
            bits,
            lattice: lattice.clone(),
            omega1,
            omega2,
            tau,
            to_reduced: inverse(&m),
            pi,
            nome,
            coeffs: Vec::new(),
            eta0_1: BigComplex::zero(bits),
            eta0_tau: BigComplex::zero(bits),
            theta_d: BigComplex::zero(bits),
        };
        let cell_im = Float::with_val(bits, &w.tau.im * &w.pi).to_f64() / 2.0;
        let n = w.terms_needed(cell_im);
        w.coeffs = w.coefficients(n);
        let mut d = BigComplex::zero(bits);
        let mut d3 = BigComplex::zero(bits);
        for (n, b) in w.coeffs.iter().enumerate() {
            let k = 2 * n as i64 + 1;
            d = d.add(&b.mul_int(k));
            d3 = d3.add(&b.mul_int(k * k * k));
        }
        let pi2_3 = Float::with_val(bits, w.pi.square_ref()) / 3u32;
        w.eta0_1 = d3.div(&d)?.mul_real(&pi2_3);
        w.theta_d = d;
        // eta(tau) = 2 zeta(tau/2), straight from the theta quotient at the half period
        let half = w.tau.div_int(2);
        let sums = w.theta_sums(&BigComplex::new(Float::with_val(bits, &half.re * &w.pi), Float::with_val(bits, &half.im * &w.pi)), &w.coeffs);
        let log_deriv = sums.s1.div(&sums.s0)?.mul_real(&w.pi);
        w.eta0_tau = w.eta0_1.mul(&w.tau).add(&log_deriv.mul_int(2));
        Ok(w)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn reduced_basis(&self) -> (&BigComplex, &BigComplex) {
        (&self.omega1, &self.omega2)
    }

    /// Absolute truncation threshold: the tail target or the working precision, whichever is finer.
    fn truncation_log2(&self) -> f64 {
        let tail = f64::from(self.ctx.tail_digits) * std::f64::consts::LOG2_10;
        tail.max(f64::from(self.bits)) + 64.0
    }

    /// Number of theta terms so that `|b_n| k^3 e^{k |Im w|}` drops below the threshold.
    fn terms_needed(&self, im_w: f64) -> usize {
        let a = self.pi.to_f64() * self.tau.im.to_f64();
        let target = self.truncation_log2() * LN2;
        let mut n = 1usize;
        loop {
            let nf = n as f64;
            let k = 2.0 * nf + 1.0;
            // log of the n-th term relative to the leading one
            let rel = -a * nf * (nf + 1.0) + (k - 1.0) * im_w.abs() + 3.0 * k.ln();
            let slope = -a * (2.0 * nf + 2.0) + 2.0 * im_w.abs();
            if rel < -target && slope < 0.0 {
                return n + 1;
            }
            n += 1;
        }
    }

    fn coefficients(&self, n: usize) -> Vec<BigComplex> {
        let mut out = Vec::with_capacity(n);
        let p2 = self.nome.square();
        let mut p2n = BigComplex::one(self.bits);
        let mut b = BigComplex::one(self.bits);
        for j in 0..n {
            if j > 0 {
                p2n = p2n.mul(&p2);
                b = b.mul(&p2n).neg();
            }
            out.push(b.clone());
        }
        out
    }

    fn theta_sums(&self, w: &BigComplex, coeffs: &[BigComplex]) -> ThetaSums {
        let bits = w.prec();
        let mut s = [BigComplex::zero(bits), BigComplex::zero(bits), BigComplex::zero(bits), BigComplex::zero(bits)];
        for (n, b) in coeffs.iter().enumerate() {
            let k = 2 * n as i64 + 1;
            let (sin, cos) = w.mul_int(k).sin_cos();
            let bs = b.mul(&sin);
            let bc = b.mul(&cos);
            s[0] = s[0].add(&bs);
            s[1] = s[1].add(&bc.mul_int(k));
            s[2] = s[2].sub(&bs.mul_int(k * k));
            s[3] = s[3].sub(&bc.mul_int(k * k * k));
        }
        let [s0, s1, s2, s3] = s;
        ThetaSums { s0, s1, s2, s3 }
    }

    /// Writes `u = u0 + m + n tau` with `u0` in the centered cell.
    fn reduce_scaled(&self, u: &BigComplex) -> Result<(BigComplex, i64, i64)> {
        let big = || Error::Domain("argument too far from the origin".into());
        let n = Float::with_val(self.bits, &u.im / &self.tau.im).to_integer().ok_or_else(big)?.to_i64().ok_or_else(big)?;
        let v = u.sub(&self.tau.mul_int(n));
        let m = v.re.to_integer().ok_or_else(big)?.to_i64().ok_or_else(big)?;
        let u0 = v.sub(&BigComplex::from_int(m, self.bits));
        Ok((u0, m, n))
    }

    fn scaled_arg(&self, z: &BigComplex) -> Result<BigComplex> {
        z.with_prec(self.bits).div(&self.omega1)
    }

    fn check_pole(&self, u0: &BigComplex, what: &str) -> Result<()> {
        let tol = pow10(-(i64::from(self.ctx.decimal_digits) / 2), 64);
        if u0.abs() < tol {
            return Err(Error::Pole(format!("{what}: argument within 1e-{} of a lattice point", self.ctx.decimal_digits / 2)));
        }
        Ok(())
    }

    fn w_of(&self, u0: &BigComplex) -> BigComplex {
        u0.mul_real(&self.pi)
    }

    /// Quasi-period `eta0(m + n tau)` of `Z + tau Z`.
    fn eta0(&self, m: i64, n: i64) -> BigComplex {
        self.eta0_1.mul_int(m).add(&self.eta0_tau.mul_int(n))
    }

    fn zeta0_cell(&self, u0: &BigComplex) -> Result<BigComplex> {
        let s = self.theta_sums(&self.w_of(u0), &self.coeffs);
        Ok(self.eta0_1.mul(u0).add(&s.s1.div(&s.s0)?.mul_real(&self.pi)))
    }

    fn sigma0_cell(&self, u0: &BigComplex) -> Result<BigComplex> {
        let s = self.theta_sums(&self.w_of(u0), &self.coeffs);
        let gauss = self.eta0_1.mul(&u0.square()).div_int(2).exp();
        let inv_pi = Float::with_val(self.bits, self.pi.recip_ref());
        Ok(gauss.mul(&s.s0.div(&self.theta_d)?).mul_real(&inv_pi))
    }

    /// `(wp, wp')` of `Z + tau Z` at a point of the cell.
    fn wp0_cell(&self, u0: &BigComplex) -> Result<(BigComplex, BigComplex)> {
        let s = self.theta_sums(&self.w_of(u0), &self.coeffs);
        let r1 = s.s1.div(&s.s0)?;
        let r2 = s.s2.div(&s.s0)?;
        let r3 = s.s3.div(&s.s0)?;
        let pi2 = Float::with_val(self.bits, self.pi.square_ref());
        let pi3 = Float::with_val(self.bits, &pi2 * &self.pi);
        // (log theta)'' = r2 - r1^2, (log theta)''' = r3 - 3 r2 r1 + 2 r1^3
        let wp = self.eta0_1.add(&r2.sub(&r1.square()).mul_real(&pi2)).neg();
        let third = r3.sub(&r2.mul(&r1).mul_int(3)).add(&r1.pow_u(3).mul_int(2));
        let wpp = third.mul_real(&pi3).neg();
        Ok((wp, wpp))
    }

    pub fn wp(&self, z: &BigComplex) -> Result<BigComplex> {
        Ok(self.wp_and_prime(z)?.0)
    }

    pub fn wp_prime(&self, z: &BigComplex) -> Result<BigComplex> {
        Ok(self.wp_and_prime(z)?.1)
    }

    pub fn wp_and_prime(&self, z: &BigComplex) -> Result<(BigComplex, BigComplex)> {
        let (u0, _, _) = self.reduce_scaled(&self.scaled_arg(z)?)?;
        self.check_pole(&u0, "wp")?;
        let (p, pp) = self.wp0_cell(&u0)?;
        let c2 = self.omega1.square().recip()?;
        let c3 = c2.div(&self.omega1)?;
        Ok((p.mul(&c2).check("wp")?, pp.mul(&c3).check("wp'")?))
    }

    pub fn zeta(&self, z: &BigComplex) -> Result<BigComplex> {
        let (u0, m, n) = self.reduce_scaled(&self.scaled_arg(z)?)?;
        self.check_pole(&u0, "zeta")?;
        let v = self.zeta0_cell(&u0)?.add(&self.eta0(m, n));
        v.div(&self.omega1)?.check("zeta")
    }

    pub fn sigma(&self, z: &BigComplex) -> Result<BigComplex> {
        let (u0, m, n) = self.reduce_scaled(&self.scaled_arg(z)?)?;
        let lam = BigComplex::from_int(m, self.bits).add(&self.tau.mul_int(n));
        let eps = if (m + n + m * n) % 2 == 0 { 1 } else { -1 };
        let factor = self.eta0(m, n).mul(&u0.add(&lam.div_int(2))).exp().mul_int(eps);
        let v = self.sigma0_cell(&u0)?.mul(&factor);
        v.mul(&self.omega1).check("sigma")
    }

    /// Direct theta evaluation without reducing `z` into the cell (for cross-checks).
    pub fn zeta_unreduced(&self, z: &BigComplex) -> Result<BigComplex> {
        let u = self.scaled_arg(z)?;
        let (s, extra) = self.theta_sums_direct(&u);
        let u = u.with_prec(self.bits + extra);
        let eta = self.eta0_1.with_prec(self.bits + extra);
        let pi = Float::with_val(self.bits + extra, &self.pi);
        let v = eta.mul(&u).add(&s.s1.div(&s.s0)?.mul_real(&pi));
        Ok(v.div(&self.omega1)?.with_prec(self.bits))
    }

    pub fn sigma_unreduced(&self, z: &BigComplex) -> Result<BigComplex> {
        let u = self.scaled_arg(z)?;
        let (s, extra) = self.theta_sums_direct(&u);
        let b = self.bits + extra;
        let u = u.with_prec(b);
        let gauss = self.eta0_1.with_prec(b).mul(&u.square()).div_int(2).exp();
        let inv_pi = Float::with_val(b, self.pi.recip_ref());
        let v = gauss.mul(&s.s0.div(&self.theta_d.with_prec(b))?).mul_real(&inv_pi);
        Ok(v.mul(&self.omega1).with_prec(self.bits))
    }

    fn theta_sums_direct(&self, u: &BigComplex) -> (ThetaSums, u32) {
        let im_w = Float::with_val(self.bits, &u.im * &self.pi).to_f64();
        let n = self.terms_needed(im_w);
        // headroom for the largest term relative to the leading one
        let a = self.pi.to_f64() * self.tau.im.to_f64();
        let peak = (0..n)
            .map(|j| {
                let jf = j as f64;
                -a * jf * (jf + 1.0) + 2.0 * jf * im_w.abs()
            })
            .fold(0.0f64, f64::max);
        let extra = (peak / LN2).ceil() as u32 + 16;
        let hi = self.clone_shallow(extra);
        let coeffs = hi.coefficients(n);
        let w = u.with_prec(hi.bits).mul_real(&hi.pi);
        (hi.theta_sums(&w, &coeffs), extra)
    }

    fn clone_shallow(&self, extra: u32) -> Weierstrass {
        let b = self.bits + extra;
        let pi = pi(b);
        let tau = self.tau.with_prec(b);
        let nome = nome_of(&tau, &pi);
        Weierstrass {
            ctx: self.ctx,
            bits: b,
            lattice: self.lattice.clone(),
            omega1: self.omega1.with_prec(b),
            omega2: self.omega2.with_prec(b),
            tau,
            to_reduced: self.to_reduced,
            pi,
            nome,
            coeffs: Vec::new(),
            eta0_1: self.eta0_1.with_prec(b),
            eta0_tau: self.eta0_tau.with_prec(b),
            theta_d: self.theta_d.with_prec(b),
        }
    }

    /// `eta(lambda)` for a lattice vector `lambda`.
    pub fn eta(&self, lambda: &BigComplex) -> Result<BigComplex> {
        let u = self.scaled_arg(lambda)?;
        let (u0, m, n) = self.reduce_scaled(&u)?;
        if log10_abs(&u0.abs()) > -(f64::from(self.ctx.decimal_digits) / 2.0) {
            return Err(Error::Domain(format!("{lambda:?} is not a lattice vector")));
        }
        self.eta0(m, n).div(&self.omega1)
    }

    /// `(eta(lambda1), eta(lambda2))` for the lattice's own (unreduced) basis.
    pub fn basis_etas(&self) -> Result<(BigComplex, BigComplex)> {
        let e1 = self.eta0_1.div(&self.omega1)?;
        let e2 = self.eta0_tau.div(&self.omega1)?;
        let comb = |r: &[i64; 2]| e1.mul_int(r[0]).add(&e2.mul_int(r[1]));
        Ok((comb(&self.to_reduced[0]), comb(&self.to_reduced[1])))
    }

    /// `g2, g3` from `E4, E6` at `q = p^2`.
    fn g2_g3(&self) -> Result<(BigComplex, BigComplex)> {
        let b = self.bits;
        let q = self.nome.square();
        let qa = q.abs().to_f64();
        let target = -self.truncation_log2() * LN2;
        let mut s3 = BigComplex::zero(b);
        let mut s5 = BigComplex::zero(b);
        let mut qn = BigComplex::one(b);
        let one = BigComplex::one(b);
        let mut n: i64 = 1;
        loop {
            qn = qn.mul(&q);
            let t = qn.div(&one.sub(&qn))?;
            s3 = s3.add(&t.mul_int(n * n * n));
            s5 = s5.add(&t.mul_int(n * n * n * n * n));
            let nf = n as f64;
            // ratio of consecutive terms is below 1/2 here, so the tail is at most twice the last term
            let log_term = 5.0 * nf.ln() + nf * qa.ln() - (1.0 - qa).ln() + 2f64.ln();
            if log_term < target && (1.0 + 1.0 / nf).powi(5) * qa < 0.5 {
                break;
            }
            n += 1;
            if n > 1_000_000 {
                return Err(Error::DegenerateLattice("q-series does not converge".into()));
            }
        }
        let e4 = one.add(&s3.mul_int(240));
        let e6 = one.sub(&s5.mul_int(504));
        let pi2 = Float::with_val(b, self.pi.square_ref());
        let pi4 = Float::with_val(b, pi2.square_ref());
        let pi6 = Float::with_val(b, &pi4 * &pi2);
        let g2_0 = e4.mul_real(&Float::with_val(b, pi4 * 4u32 / 3u32));
        let g3_0 = e6.mul_real(&Float::with_val(b, pi6 * 8u32 / 27u32));
        let w2 = self.omega1.square();
        let w4 = w2.square();
        let w6 = w4.mul(&w2);
        Ok((g2_0.div(&w4)?, g3_0.div(&w6)?))
    }

    pub fn invariants(&self) -> Result<LatticeInvariants> {
        let (g2, g3) = self.g2_g3()?;
        let g2c = g2.pow_u(3);
        let disc = g2c.sub(&g3.square().mul_int(27));
        let scale = g2c.abs().max(&Float::with_val(self.bits, g3.square().abs() * 27u32)).clone();
        let tol = Float::with_val(self.bits, &scale * pow10(-i64::from(self.ctx.decimal_digits), self.bits));
        if disc.abs() <= tol {
            return Err(Error::DegenerateLattice("discriminant vanishes to working precision".into()));
        }
        let j = g2c.mul_int(1728).div(&disc)?;
        let (eta1, eta2) = self.basis_etas()?;
        let (lambda1, lambda2) = self.lattice.basis(self.bits);
        Ok(LatticeInvariants {
            g2: g2.check("g2")?,
            g3: g3.check("g3")?,
            discriminant: disc,
            j: j.check("j")?,
            eta1,
            eta2,
            lambda1,
            lambda2,
        })
    }
}

impl LatticeInvariants {
    pub fn report(&self, digits: usize) -> InvariantsReport {
        InvariantsReport {
            g2: self.g2.to_string_digits(digits),
            g3: self.g3.to_string_digits(digits),
            discriminant: self.discriminant.to_string_digits(digits),
            j: self.j.to_string_digits(digits),
            eta1: self.eta1.to_string_digits(digits),
            eta2: self.eta2.to_string_digits(digits),
            legendre_residual: self.legendre_residual().to_string_radix(10, Some(6)),
        }
    }
}

pub fn invariants(l: &Lattice, ctx: &PrecisionContext) -> Result<LatticeInvariants> {
    Weierstrass::new(l, ctx)?.invariants()
}

pub fn wp(z: &BigComplex, l: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    Weierstrass::new(l, ctx)?.wp(z)
}

pub fn wp_prime(z: &BigComplex, l: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    Weierstrass::new(l, ctx)?.wp_prime(z)
}

pub fn zeta_w(z: &BigComplex, l: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    Weierstrass::new(l, ctx)?.zeta(z)
}

pub fn sigma_w(z: &BigComplex, l: &Lattice, ctx: &PrecisionContext) -> Result<BigComplex> {
    Weierstrass::new(l, ctx)?.sigma(z)
}

/// `|eta1 lambda2 - eta2 lambda1 - 2 pi i|` for the lattice's oriented basis.
pub fn legendre_residual(l: &Lattice, ctx: &PrecisionContext) -> Result<Float> {
    let w = Weierstrass::new(l, ctx)?;
    let (e1, e2) = w.basis_etas()?;
    let (l1, l2) = l.basis(w.bits());
    Ok(legendre_expr(&e1, &e2, &l1, &l2))
}

/// Legendre residual for a basis taken in the given order, without re-orienting it.
pub fn legendre_residual_ordered(l1: &BigComplex, l2: &BigComplex, ctx: &PrecisionContext) -> Result<Float> {
    let lat = Lattice::from_numeric(l1.clone(), l2.clone())?;
    let w = Weierstrass::new(&lat, ctx)?;
    let e1 = w.eta(l1)?;
    let e2 = w.eta(l2)?;
    Ok(legendre_expr(&e1, &e2, &l1.with_prec(w.bits()), &l2.with_prec(w.bits())))
}

fn legendre_expr(e1: &BigComplex, e2: &BigComplex, l1: &BigComplex, l2: &BigComplex) -> Float {
    let bits = e1.prec();
    let two_pi_i = BigComplex::new(Float::new(bits), Float::with_val(bits, pi(bits) * 2u32));
    e1.mul(l2).sub(&e2.mul(l1)).sub(&two_pi_i).abs()
}
