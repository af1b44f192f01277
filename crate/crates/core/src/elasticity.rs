//! Stored energy, strain invariants, Piola--Kirchhoff stresses and the
//! order-by-order perturbation split of the second Piola stress.
//!
//! The material is the five-coefficient polynomial stored energy
//! `sigma = sigma_2 j_2 + sum_{rs} sigma_rs j_r j_s / 2 + sigma_111 j_1^3 / 6`
//! with a stress-free reference state (`sigma_1 = 0` built in). Pointwise
//! complex 2x2 algebra lives in [`cm`]; the field-level operations map it
//! over a [`GridField`].

use crate::fields::{GridField, Rank};
use crate::{Error, Result};
use num_complex::Complex64;

/// Complex 2x2 matrix helpers used by the stress algebra.
pub mod cm {
    use num_complex::Complex64;

    pub type CMat2 = [[Complex64; 2]; 2];

    pub const fn zero() -> CMat2 {
        let z = Complex64::new(0.0, 0.0);
        [[z, z], [z, z]]
    }

    pub fn identity() -> CMat2 {
        let mut m = zero();
        m[0][0] = Complex64::new(1.0, 0.0);
        m[1][1] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn add(a: &CMat2, b: &CMat2) -> CMat2 {
        let mut out = zero();
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][c] + b[r][c];
            }
        }
        out
    }

    pub fn sub(a: &CMat2, b: &CMat2) -> CMat2 {
        let mut out = zero();
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][c] - b[r][c];
            }
        }
        out
    }

    pub fn mul(a: &CMat2, b: &CMat2) -> CMat2 {
        let mut out = zero();
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    pub fn scale(a: &CMat2, s: Complex64) -> CMat2 {
        let mut out = zero();
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][c] * s;
            }
        }
        out
    }

    pub fn transpose(a: &CMat2) -> CMat2 {
        [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
    }

    pub fn trace(a: &CMat2) -> Complex64 {
        a[0][0] + a[1][1]
    }

    pub fn det(a: &CMat2) -> Complex64 {
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    pub fn max_norm(a: &CMat2) -> f64 {
        a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `tr(M) Id - M`: the 2x2 adjugate of a symmetric matrix.
    pub fn trace_complement(m: &CMat2) -> CMat2 {
        let t = trace(m);
        let out = scale(&identity(), t);
        sub(&out, m)
    }
}

use cm::CMat2;

/// Structural checks on the stored energy.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub admissible: bool,
    pub violations: Vec<String>,
}

/// The five stored-energy coefficients; `sigma_1 = 0` by construction.
#[derive(Debug, Clone, Copy)]
pub struct StoredEnergyCoeffs {
    pub s2: f64,
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
    pub s111: f64,
}

impl StoredEnergyCoeffs {
    pub fn new(s2: f64, s11: f64, s12: f64, s22: f64, s111: f64) -> Self {
        Self { s2, s11, s12, s22, s111 }
    }

    /// `lambda = 4 (sigma_11 + sigma_2)`, recomputed on demand.
    pub fn lambda(&self) -> f64 {
        4.0 * (self.s11 + self.s2)
    }

    /// `mu = -2 sigma_2`, recomputed on demand.
    pub fn mu(&self) -> f64 {
        -2.0 * self.s2
    }

    /// `sigma* = 2 s11 + 8 s12 + 2 s2 + 4 s111`.
    pub fn sigma_star(&self) -> f64 {
        2.0 * self.s11 + 8.0 * self.s12 + 2.0 * self.s2 + 4.0 * self.s111
    }

    /// Evaluates all structural conditions and reports every violation.
    pub fn check_structure(&self) -> StructureReport {
        let mut violations = Vec::new();
        if !(self.mu() > 0.0) {
            violations.push(format!("mu = {:.6} not positive", self.mu()));
        }
        if !(self.lambda() > 0.0) {
            violations.push(format!("lambda = {:.6} not positive", self.lambda()));
        }
        if !(self.s11 > 0.0) {
            violations.push(format!("sigma_11 = {:.6} not positive", self.s11));
        }
        if !(self.s22 > 0.0) {
            violations.push(format!("sigma_22 = {:.6} not positive", self.s22));
        }
        if !(self.s11 * self.s22 - self.s12 * self.s12 > 0.0) {
            violations.push(format!(
                "convexity: s11 s22 - s12^2 = {:.6} not positive",
                self.s11 * self.s22 - self.s12 * self.s12
            ));
        }
        if (3.0 * self.s11 + 2.0 * self.s111).abs() > 1e-12 {
            violations
                .push(format!("null: 3 s11 + 2 s111 = {:.6} nonzero", 3.0 * self.s11 + 2.0 * self.s111));
        }
        if self.sigma_star().abs() <= 1e-12 {
            violations.push("sigma* vanishes".into());
        }
        StructureReport { admissible: violations.is_empty(), violations }
    }

    pub fn require_admissible(&self) -> Result<()> {
        let rep = self.check_structure();
        if !rep.admissible {
            return Err(Error::Inadmissible(rep.violations.join("; ")));
        }
        Ok(())
    }
}

/// Pointwise strain data at one grid node.
#[derive(Debug, Clone, Copy)]
pub struct PointStrain {
    pub c: CMat2,
    pub d: CMat2,
    pub j1: Complex64,
    pub j2: Complex64,
}

/// `C = G + G^T + G G^T`, `D = G + G^T + G^T G`, `j1 = tr C`,
/// `j2 = ((tr C)^2 - tr C^2) / 2`.
pub fn strain_at(g: &CMat2) -> PointStrain {
    let gt = cm::transpose(g);
    let c = cm::add(&cm::add(g, &gt), &cm::mul(g, &gt));
    let d = cm::add(&cm::add(g, &gt), &cm::mul(&gt, g));
    let j1 = cm::trace(&c);
    let c2 = cm::mul(&c, &c);
    let j2 = (j1 * j1 - cm::trace(&c2)) * 0.5;
    PointStrain { c, d, j1, j2 }
}

/// `Lambda_1 = 2 (s11 j1 + s12 j2 + s111 j1^2 / 2)`,
/// `Lambda_2 = 2 (s2 + s12 j1 + s22 j2)`.
pub fn lambdas_at(
    coeffs: &StoredEnergyCoeffs,
    j1: Complex64,
    j2: Complex64,
) -> (Complex64, Complex64) {
    let l1 = (j1 * coeffs.s11 + j2 * coeffs.s12 + j1 * j1 * (coeffs.s111 * 0.5)) * 2.0;
    let l2 = (Complex64::new(coeffs.s2, 0.0) + j1 * coeffs.s12 + j2 * coeffs.s22) * 2.0;
    (l1, l2)
}

/// Second Piola--Kirchhoff stress `Sigma_G = L1 Id + L2 (tr C Id - D)`.
pub fn sigma_at(coeffs: &StoredEnergyCoeffs, g: &CMat2) -> CMat2 {
    let st = strain_at(g);
    let (l1, l2) = lambdas_at(coeffs, st.j1, st.j2);
    let mut out = cm::scale(&cm::identity(), l1);
    let mut tail = cm::scale(&cm::identity(), st.j1);
    tail = cm::sub(&tail, &st.d);
    out = cm::add(&out, &cm::scale(&tail, l2));
    out
}

/// First Piola--Kirchhoff stress `P = (Id + G) Sigma_G`.
pub fn piola_at(coeffs: &StoredEnergyCoeffs, g: &CMat2) -> CMat2 {
    let f = cm::add(&cm::identity(), g);
    cm::mul(&f, &sigma_at(coeffs, g))
}

/// Stored energy density at one point.
pub fn energy_at(coeffs: &StoredEnergyCoeffs, g: &CMat2) -> Complex64 {
    let st = strain_at(g);
    let (j1, j2) = (st.j1, st.j2);
    j2 * coeffs.s2
        + (j1 * j1 * coeffs.s11 + j1 * j2 * (2.0 * coeffs.s12) + j2 * j2 * coeffs.s22) * 0.5
        + j1 * j1 * j1 * (coeffs.s111 / 6.0)
}

/// Strain fields of a matrix field `G`.
#[derive(Debug, Clone)]
pub struct StrainState {
    pub g: GridField,
    pub c: GridField,
    pub d: GridField,
    pub j1: GridField,
    pub j2: GridField,
}

/// Field-level strain.
pub fn strain(g: &GridField) -> Result<StrainState> {
    g.expect_rank(Rank::Matrix)?;
    let n = g.n();
    let times = g.times().to_vec();
    let mut c = GridField::zeros(Rank::Matrix, n, times.clone());
    let mut d = GridField::zeros(Rank::Matrix, n, times.clone());
    let mut j1 = GridField::zeros(Rank::Scalar, n, times.clone());
    let mut j2 = GridField::zeros(Rank::Scalar, n, times);
    for it in 0..g.n_slices() {
        for ix in 0..n {
            for iy in 0..n {
                let gm = matrix_at(g, it, ix, iy);
                let st = strain_at(&gm);
                set_matrix(&mut c, it, ix, iy, &st.c);
                set_matrix(&mut d, it, ix, iy, &st.d);
                j1.set(it, ix, iy, 0, st.j1);
                j2.set(it, ix, iy, 0, st.j2);
            }
        }
    }
    Ok(StrainState { g: g.clone(), c, d, j1, j2 })
}

/// Stress fields assembled from a strain state.
#[derive(Debug, Clone)]
pub struct StressBundle {
    pub lambda1: GridField,
    pub lambda2: GridField,
    pub sigma: GridField,
    pub piola: GridField,
}

pub fn stress(coeffs: &StoredEnergyCoeffs, st: &StrainState) -> Result<StressBundle> {
    let n = st.g.n();
    let times = st.g.times().to_vec();
    let mut l1f = GridField::zeros(Rank::Scalar, n, times.clone());
    let mut l2f = GridField::zeros(Rank::Scalar, n, times.clone());
    let mut sig = GridField::zeros(Rank::Matrix, n, times.clone());
    let mut pio = GridField::zeros(Rank::Matrix, n, times);
    for it in 0..st.g.n_slices() {
        for ix in 0..n {
            for iy in 0..n {
                let gm = matrix_at(&st.g, it, ix, iy);
                let (l1, l2) =
                    lambdas_at(coeffs, st.j1.get(it, ix, iy, 0), st.j2.get(it, ix, iy, 0));
                l1f.set(it, ix, iy, 0, l1);
                l2f.set(it, ix, iy, 0, l2);
                let s = sigma_at(coeffs, &gm);
                set_matrix(&mut sig, it, ix, iy, &s);
                let p = cm::mul(&cm::add(&cm::identity(), &gm), &s);
                set_matrix(&mut pio, it, ix, iy, &p);
            }
        }
    }
    Ok(StressBundle { lambda1: l1f, lambda2: l2f, sigma: sig, piola: pio })
}

/// Stored energy density field.
pub fn stored_energy_density(coeffs: &StoredEnergyCoeffs, st: &StrainState) -> Result<GridField> {
    let n = st.g.n();
    let mut out = GridField::zeros(Rank::Scalar, n, st.g.times().to_vec());
    for it in 0..st.g.n_slices() {
        for ix in 0..n {
            for iy in 0..n {
                let gm = matrix_at(&st.g, it, ix, iy);
                out.set(it, ix, iy, 0, energy_at(coeffs, &gm));
            }
        }
    }
    Ok(out)
}

/// One point of the order-by-order stress split of
/// `Sigma_{Gl + Gt} - Sigma_{Gl}`.
#[derive(Debug, Clone)]
pub struct PointSplit {
    /// `tC^(k)`, k = 0, 1, 2 (k = 0 is the base `Cl`).
    pub tc: [CMat2; 3],
    pub td: [CMat2; 3],
    /// `tj1^(k)`, k = 0..2 (zero beyond).
    pub tj1: [Complex64; 3],
    /// `tj2^(k)`, k = 0..4.
    pub tj2: [Complex64; 5],
    /// `tL1^(k)`, k = 0..4.
    pub tl1: [Complex64; 5],
    /// `tL2^(k)`, k = 0..4.
    pub tl2: [Complex64; 5],
    pub ts1: CMat2,
    pub ts2: CMat2,
    pub ts3plus: CMat2,
    pub ts1m: CMat2,
    pub ts2m: CMat2,
}

/// Order-by-order split at one point.
pub fn split_at(coeffs: &StoredEnergyCoeffs, gl: &CMat2, gt: &CMat2) -> PointSplit {
    let zero = Complex64::new(0.0, 0.0);
    let glt = cm::transpose(gl);
    let gtt = cm::transpose(gt);

    let base = strain_at(gl);
    let tc = [
        base.c,
        cm::add(&cm::add(gt, &gtt), &cm::add(&cm::mul(gl, &gtt), &cm::mul(gt, &glt))),
        cm::mul(gt, &gtt),
    ];
    let td = [
        base.d,
        cm::add(&cm::add(gt, &gtt), &cm::add(&cm::mul(&glt, gt), &cm::mul(&gtt, gl))),
        cm::mul(&gtt, gt),
    ];
    let tj1 = [base.j1, cm::trace(&tc[1]), cm::trace(&tc[2])];

    // tj2^(k) = sum_{r+s=k} (tj1^r tj1^s - tr(tC^r tC^s)) / 2
    let mut tj2 = [zero; 5];
    for (k, out) in tj2.iter_mut().enumerate() {
        let mut acc = zero;
        for r in 0..=k.min(2) {
            let s = k - r;
            if s > 2 {
                continue;
            }
            acc += (tj1[r] * tj1[s] - cm::trace(&cm::mul(&tc[r], &tc[s]))) * 0.5;
        }
        *out = acc;
    }
    debug_assert!((tj2[0] - base.j2).norm() <= 1e-12 * base.j2.norm().max(1.0));

    // tL1^(k) = 2 s11 tj1^k + 2 s12 tj2^k + s111 sum_{r+s=k} tj1^r tj1^s
    // tL2^(k) = 2 s12 tj1^k + 2 s22 tj2^k   (k >= 1)
    let mut tl1 = [zero; 5];
    let mut tl2 = [zero; 5];
    for k in 0..=4usize {
        let t1 = if k <= 2 { tj1[k] } else { zero };
        let mut sq = zero;
        for r in 0..=k.min(2) {
            let s = k - r;
            if s > 2 {
                continue;
            }
            sq += tj1[r] * tj1[s];
        }
        if k == 0 {
            tl1[0] = (t1 * coeffs.s11 + tj2[0] * coeffs.s12) * 2.0 + sq * coeffs.s111;
            tl2[0] = (Complex64::new(coeffs.s2, 0.0) + t1 * coeffs.s12 + tj2[0] * coeffs.s22) * 2.0;
        } else {
            tl1[k] = (t1 * coeffs.s11 + tj2[k] * coeffs.s12) * 2.0 + sq * coeffs.s111;
            tl2[k] = (t1 * coeffs.s12 + tj2[k] * coeffs.s22) * 2.0;
        }
    }

    // tS^(k) = tL1^(k) Id + sum_{r+s=k} tL2^(r) (tr tC^(s) Id - tD^(s))
    let ts_order = |k: usize| -> CMat2 {
        let mut out = cm::scale(&cm::identity(), if k <= 4 { tl1[k] } else { zero });
        for r in 0..=k.min(4) {
            let s = k - r;
            if s > 2 {
                continue;
            }
            let mut block = cm::scale(&cm::identity(), tj1[s]);
            block = cm::sub(&block, &td[s]);
            out = cm::add(&out, &cm::scale(&block, tl2[r]));
        }
        out
    };
    let ts1 = ts_order(1);
    let ts2 = ts_order(2);
    let mut ts3plus = cm::zero();
    for k in 3..=6 {
        ts3plus = cm::add(&ts3plus, &ts_order(k));
    }

    // main parts
    let lam = coeffs.lambda();
    let mu = coeffs.mu();
    let mut ts1m = cm::scale(&cm::identity(), cm::trace(gt) * lam);
    ts1m = cm::add(&ts1m, &cm::scale(&cm::add(gt, &gtt), Complex64::new(mu, 0.0)));
    let ts2m = ts2_main_at(coeffs, gt);

    PointSplit { tc, td, tj1, tj2, tl1, tl2, ts1, ts2, ts3plus, ts1m, ts2m }
}

/// Closed form of the quadratic main part:
/// `(2(s11 - s12 + s2) tr(Gt Gt^T) + 4(3 s12 + s111)(tr Gt)^2 - 2 s12 tr(Gt^2)) Id`
/// `- 2 s2 Gt^T Gt - 4 s12 tr(Gt) (Gt + Gt^T)`.
pub fn ts2_main_at(coeffs: &StoredEnergyCoeffs, gt: &CMat2) -> CMat2 {
    let gtt = cm::transpose(gt);
    let tr = cm::trace(gt);
    let scal = cm::trace(&cm::mul(gt, &gtt)) * (2.0 * (coeffs.s11 - coeffs.s12 + coeffs.s2))
        + tr * tr * (4.0 * (3.0 * coeffs.s12 + coeffs.s111))
        - cm::trace(&cm::mul(gt, gt)) * (2.0 * coeffs.s12);
    let mut out = cm::scale(&cm::identity(), scal);
    out = cm::sub(&out, &cm::scale(&cm::mul(&gtt, gt), Complex64::new(2.0 * coeffs.s2, 0.0)));
    out = cm::sub(&out, &cm::scale(&cm::add(gt, &gtt), tr * (4.0 * coeffs.s12)));
    out
}

/// Field-level split of `Sigma_{Gl + Gt} - Sigma_{Gl}`.
#[derive(Debug, Clone)]
pub struct StressPerturbationSplit {
    pub ts1: GridField,
    pub ts2: GridField,
    pub ts3plus: GridField,
    pub ts1m: GridField,
    pub ts2m: GridField,
    /// `tj1^(k)` fields, k = 0..2.
    pub tj1: Vec<GridField>,
    /// `tj2^(k)` fields, k = 0..4.
    pub tj2: Vec<GridField>,
    /// `tL1^(k)`, `tL2^(k)` fields, k = 0..4.
    pub tl1: Vec<GridField>,
    pub tl2: Vec<GridField>,
    /// `tC^(k)`, `tD^(k)` fields, k = 0..2.
    pub tc: Vec<GridField>,
    pub td: Vec<GridField>,
}

pub fn perturb_split(
    coeffs: &StoredEnergyCoeffs,
    gl: &GridField,
    gt: &GridField,
) -> Result<StressPerturbationSplit> {
    gl.expect_rank(Rank::Matrix)?;
    gt.expect_rank(Rank::Matrix)?;
    let n = gl.n();
    let times = gl.times().to_vec();
    let mk_mat = || GridField::zeros(Rank::Matrix, n, times.clone());
    let mk_sc = || GridField::zeros(Rank::Scalar, n, times.clone());
    let mut out = StressPerturbationSplit {
        ts1: mk_mat(),
        ts2: mk_mat(),
        ts3plus: mk_mat(),
        ts1m: mk_mat(),
        ts2m: mk_mat(),
        tj1: (0..3).map(|_| mk_sc()).collect(),
        tj2: (0..5).map(|_| mk_sc()).collect(),
        tl1: (0..5).map(|_| mk_sc()).collect(),
        tl2: (0..5).map(|_| mk_sc()).collect(),
        tc: (0..3).map(|_| mk_mat()).collect(),
        td: (0..3).map(|_| mk_mat()).collect(),
    };
    for it in 0..gl.n_slices() {
        for ix in 0..n {
            for iy in 0..n {
                let glm = matrix_at(gl, it, ix, iy);
                let gtm = matrix_at(gt, it, ix, iy);
                let p = split_at(coeffs, &glm, &gtm);
                set_matrix(&mut out.ts1, it, ix, iy, &p.ts1);
                set_matrix(&mut out.ts2, it, ix, iy, &p.ts2);
                set_matrix(&mut out.ts3plus, it, ix, iy, &p.ts3plus);
                set_matrix(&mut out.ts1m, it, ix, iy, &p.ts1m);
                set_matrix(&mut out.ts2m, it, ix, iy, &p.ts2m);
                for k in 0..3 {
                    out.tj1[k].set(it, ix, iy, 0, p.tj1[k]);
                    set_matrix(&mut out.tc[k], it, ix, iy, &p.tc[k]);
                    set_matrix(&mut out.td[k], it, ix, iy, &p.td[k]);
                }
                for k in 0..5 {
                    out.tj2[k].set(it, ix, iy, 0, p.tj2[k]);
                    out.tl1[k].set(it, ix, iy, 0, p.tl1[k]);
                    out.tl2[k].set(it, ix, iy, 0, p.tl2[k]);
                }
            }
        }
    }
    Ok(out)
}

/// Reads a 2x2 matrix out of a matrix field at one node.
#[inline]
pub fn matrix_at(f: &GridField, it: usize, ix: usize, iy: usize) -> CMat2 {
    [
        [f.get(it, ix, iy, 0), f.get(it, ix, iy, 1)],
        [f.get(it, ix, iy, 2), f.get(it, ix, iy, 3)],
    ]
}

#[inline]
pub fn set_matrix(f: &mut GridField, it: usize, ix: usize, iy: usize, m: &CMat2) {
    f.set(it, ix, iy, 0, m[0][0]);
    f.set(it, ix, iy, 1, m[0][1]);
    f.set(it, ix, iy, 2, m[1][0]);
    f.set(it, ix, iy, 3, m[1][1]);
}
