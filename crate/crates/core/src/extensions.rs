//! Standard uniformizations of extensions of an elliptic curve by `Ga` and `Gm`,
//! as maps `C^2 -> P^5`, and numerical checks of their period kernels.

use rug::Float;
use serde_json::{json, Value};

use crate::arith::bigcomplex::log10_abs;
use crate::arith::{BigComplex, PrecisionContext};
use crate::error::{Error, Result};
use crate::weierstrass::{Lattice, Weierstrass};

#[derive(Clone, Debug, PartialEq)]
pub enum ExtensionKind {
    Ga(BigComplex),
    Gm(BigComplex),
}

#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    pub kind: ExtensionKind,
    pub base: Lattice,
}

impl ExtensionSpec {
    pub fn ga(t: BigComplex, base: Lattice) -> Self {
        ExtensionSpec { kind: ExtensionKind::Ga(t), base }
    }

    pub fn gm(omega: BigComplex, base: Lattice) -> Self {
        ExtensionSpec { kind: ExtensionKind::Gm(omega), base }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ExtensionKind::Ga(_) => "ga",
            ExtensionKind::Gm(_) => "gm",
        }
    }
}

/// Homogeneous coordinates `[X0 : ... : X5]`.
#[derive(Clone, Debug)]
pub struct ProjectivePoint5(pub [BigComplex; 6]);

impl ProjectivePoint5 {
    fn pivot(&self) -> usize {
        let mut best = 0;
        for k in 1..6 {
            if self.0[k].norm_sqr() > self.0[best].norm_sqr() {
                best = k;
            }
        }
        best
    }

    /// Both points scaled so that the largest coordinate of `self` becomes 1;
    /// the distance is the largest coordinate difference.
    pub fn distance(&self, other: &ProjectivePoint5) -> Result<Float> {
        let k = self.pivot();
        let a = self.0[k].clone();
        let b = other.0[k].clone();
        if b.is_zero() {
            return Ok(Float::with_val(53, f64::INFINITY));
        }
        let mut worst = Float::new(a.prec());
        for j in 0..6 {
            let d = self.0[j].div(&a)?.sub(&other.0[j].div(&b)?).abs();
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }

    pub fn to_strings(&self, digits: usize) -> Vec<String> {
        self.0.iter().map(|c| c.to_string_digits(digits)).collect()
    }
}

/// Kernel element of `exp_G` as a vector `(z1, z2)`.
pub type Period = (BigComplex, BigComplex);

/// An extension prepared for evaluation at one precision.
pub struct Extension {
    spec: ExtensionSpec,
    w: Weierstrass,
    /// `zeta(omega)` and `sigma(omega)^3` for the `Gm` case.
    zeta_omega: Option<BigComplex>,
    sigma_omega_cubed: Option<BigComplex>,
}

impl Extension {
    pub fn new(spec: &ExtensionSpec, ctx: &PrecisionContext) -> Result<Self> {
        let w = Weierstrass::new(&spec.base, ctx)?;
        let (mut zeta_omega, mut sigma_omega_cubed) = (None, None);
        if let ExtensionKind::Gm(omega) = &spec.kind {
            if w.eta(omega).is_ok() {
                return Err(Error::Domain(format!("omega = {} lies in the lattice", omega.to_string_digits(20))));
            }
            let omega = omega.with_prec(w.bits());
            zeta_omega = Some(w.zeta(&omega)?);
            sigma_omega_cubed = Some(w.sigma(&omega)?.pow_u(3));
        }
        Ok(Extension { spec: spec.clone(), w, zeta_omega, sigma_omega_cubed })
    }

    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    pub fn weierstrass(&self) -> &Weierstrass {
        &self.w
    }

    fn fiber(&self, what: &str, z: &BigComplex) -> Result<BigComplex> {
        match self.w.sigma(z) {
            Ok(s) if !s.is_zero() => Ok(s),
            Ok(_) => Err(Error::Pole(format!("{what}: sigma vanishes"))),
            Err(e) => Err(e),
        }
    }

    /// `[wp(z2) : wp'(z2) : 1 : f3 : f2 : f1]`.
    pub fn exp(&self, z1: &BigComplex, z2: &BigComplex) -> Result<ProjectivePoint5> {
        let bits = self.w.bits();
        let (z1, z2) = (z1.with_prec(bits), z2.with_prec(bits));
        let (p, dp) = self.w.wp_and_prime(&z2).map_err(|e| rename_pole(e, "wp(z2)"))?;
        let (f3, f2, f1) = match &self.spec.kind {
            ExtensionKind::Ga(t) => {
                let t = t.with_prec(bits);
                let f1 = z1.add(&t.mul(&self.w.zeta(&z2).map_err(|e| rename_pole(e, "zeta(z2)"))?));
                let f2 = dp.mul(&f1).add(&t.mul(&p.square()).mul_int(2));
                let f3 = p.mul(&f1).add(&t.mul(&dp).div_int(2));
                (f3, f2, f1)
            }
            ExtensionKind::Gm(omega) => {
                let omega = omega.with_prec(bits);
                let shifted = z2.sub(&omega);
                let num = self.fiber("sigma(z2 - omega)", &shifted)?.pow_u(3);
                let den = self.fiber("sigma(z2)", &z2)?.pow_u(3).mul(self.sigma_omega_cubed.as_ref().expect("gm"));
                let zeta_omega = self.zeta_omega.as_ref().expect("gm");
                let expo = zeta_omega.mul(&z2).mul_int(3).add(&z1).exp();
                let f1 = num.mul(&expo).div(&den)?;
                let (ps, dps) = self.w.wp_and_prime(&shifted).map_err(|e| rename_pole(e, "wp(z2 - omega)"))?;
                (ps.mul(&f1), dps.mul(&f1), f1)
            }
        };
        let one = BigComplex::one(bits);
        let pt = ProjectivePoint5([p, dp, one, f3, f2, f1]);
        for (k, c) in pt.0.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite(format!("coordinate X{k}")));
            }
        }
        Ok(pt)
    }

    /// Generators of the kernel of the map computed by [`Extension::exp`]:
    /// `(-t eta(l_j), l_j)` for `Ga` and `(3 (eta(l_j) omega - zeta(omega) l_j), l_j)` for `Gm`.
    pub fn kernel_generators(&self) -> Result<[Period; 2]> {
        self.generators(false)
    }

    /// The generators `(t eta(l_j), l_j)` and `(zeta(omega) l_j - eta(l_j) omega, l_j)` in the
    /// customary printed form. They are not periods of the map above (see `printed_form_is_not_periodic`).
    pub fn printed_kernel_generators(&self) -> Result<[Period; 2]> {
        self.generators(true)
    }

    fn generators(&self, printed: bool) -> Result<[Period; 2]> {
        let bits = self.w.bits();
        let (l1, l2) = self.spec.base.basis(bits);
        let (e1, e2) = self.w.basis_etas()?;
        let make = |l: BigComplex, e: BigComplex| -> Period {
            let first = match &self.spec.kind {
                ExtensionKind::Ga(t) => {
                    let v = t.with_prec(bits).mul(&e);
                    if printed {
                        v
                    } else {
                        v.neg()
                    }
                }
                ExtensionKind::Gm(omega) => {
                    let zeta = self.zeta_omega.as_ref().expect("gm");
                    let v = zeta.mul(&l).sub(&e.mul(&omega.with_prec(bits)));
                    if printed {
                        v
                    } else {
                        v.mul_int(-3)
                    }
                }
            };
            (first, l)
        };
        Ok([make(l1, e1), make(l2, e2)])
    }

    /// Projective distance between `exp(z)` and `exp(z + g)`.
    pub fn residual_for(&self, z: &Period, g: &Period) -> Result<Float> {
        let a = self.exp(&z.0, &z.1)?;
        let b = self.exp(&z.0.add(&g.0), &z.1.add(&g.1))?;
        a.distance(&b)
    }

    /// Largest residual over the two kernel generators.
    pub fn periodicity_residual(&self, z: &Period) -> Result<Float> {
        let gens = self.kernel_generators()?;
        let r1 = self.residual_for(z, &gens[0])?;
        let r2 = self.residual_for(z, &gens[1])?;
        Ok(if r1 > r2 { r1 } else { r2 })
    }
}

fn rename_pole(e: Error, what: &str) -> Error {
    match e {
        Error::Pole(m) => Error::Pole(format!("{what}: {m}")),
        other => other,
    }
}

pub fn exp_ext(spec: &ExtensionSpec, z1: &BigComplex, z2: &BigComplex, ctx: &PrecisionContext) -> Result<ProjectivePoint5> {
    Extension::new(spec, ctx)?.exp(z1, z2)
}

pub fn kernel_generators(spec: &ExtensionSpec, ctx: &PrecisionContext) -> Result<[Period; 2]> {
    Extension::new(spec, ctx)?.kernel_generators()
}

pub fn periodicity_residual(spec: &ExtensionSpec, z: &Period, ctx: &PrecisionContext) -> Result<Float> {
    Extension::new(spec, ctx)?.periodicity_residual(z)
}

/// Generators, their residuals at `z`, and the residuals of the printed generators.
pub fn kernel_report(spec: &ExtensionSpec, z: &Period, ctx: &PrecisionContext) -> Result<Value> {
    let ext = Extension::new(spec, ctx)?;
    let digits = ctx.decimal_digits as usize;
    let fmt = |r: &Float| format!("{:.3e}", r.to_f64());
    let gens = ext.kernel_generators()?;
    let printed = ext.printed_kernel_generators()?;
    let mut rows = Vec::new();
    for j in 0..2 {
        let r = ext.residual_for(z, &gens[j])?;
        let rp = ext.residual_for(z, &printed[j])?;
        rows.push(json!({
            "index": j + 1,
            "generator": [gens[j].0.to_string_digits(digits), gens[j].1.to_string_digits(digits)],
            "residual": fmt(&r),
            "log10_residual": log10_abs(&r),
            "printed_generator": [printed[j].0.to_string_digits(digits), printed[j].1.to_string_digits(digits)],
            "printed_residual": fmt(&rp),
        }));
    }
    let param = match &spec.kind {
        ExtensionKind::Ga(t) | ExtensionKind::Gm(t) => t.to_string_digits(digits),
    };
    Ok(json!({
        "kind": spec.kind_name(),
        "param": param,
        "z": [z.0.to_string_digits(digits), z.1.to_string_digits(digits)],
        "generators": rows,
    }))
}
