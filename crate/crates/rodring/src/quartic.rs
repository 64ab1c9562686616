//! Real-root solvers for polynomials up to degree four: closed forms with
//! derivative polishing, degree drops dispatched to lower-order solvers.

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn eval_deriv(coeffs: &[f64], x: f64) -> f64 {
    let n = coeffs.len() - 1;
    let mut acc = 0.0;
    for (i, &c) in coeffs.iter().enumerate().take(n) {
        acc = acc * x + c * (n - i) as f64;
    }
    acc
}

/// A few Newton steps against the original polynomial.
fn polish(coeffs: &[f64], mut x: f64) -> f64 {
    for _ in 0..3 {
        let f = eval_poly(coeffs, x);
        let d = eval_deriv(coeffs, x);
        if d.abs() < 1e-300 {
            break;
        }
        let step = f / d;
        if !step.is_finite() {
            break;
        }
        x -= step;
    }
    x
}

fn dedupe_sorted(mut roots: Vec<f64>, scale: f64) -> Vec<f64> {
    roots.retain(|r| r.is_finite());
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + scale));
    roots
}

pub fn solve_linear(c1: f64, c0: f64) -> Vec<f64> {
    if c1 == 0.0 {
        Vec::new()
    } else {
        vec![-c0 / c1]
    }
}

pub fn solve_quadratic(c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c2 == 0.0 {
        return solve_linear(c1, c0);
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    // Numerically stable split avoiding cancellation.
    let sq = disc.sqrt();
    let q = -0.5 * (c1 + c1.signum() * sq);
    let mut roots = Vec::new();
    if q != 0.0 {
        roots.push(q / c2);
        roots.push(c0 / q);
    } else {
        roots.push(0.0);
        roots.push(-c1 / c2);
    }
    dedupe_sorted(roots, c0.abs().max(c1.abs()).max(c2.abs()))
}

pub fn solve_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c3 == 0.0 {
        return solve_quadratic(c2, c1, c0);
    }
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // Depressed: t^3 + pt + q with x = t - a/3.
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let mut roots = Vec::new();
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        roots.push(u + v + shift);
    } else if disc == 0.0 {
        if q == 0.0 {
            roots.push(shift);
        } else {
            let u = (-q / 2.0).cbrt();
            roots.push(2.0 * u + shift);
            roots.push(-u + shift);
        }
    } else {
        // Three real roots: trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        for k in 0..3 {
            roots.push(m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift);
        }
    }
    let coeffs = [c3, c2, c1, c0];
    let polished: Vec<f64> = roots.into_iter().map(|r| polish(&coeffs, r)).collect();
    dedupe_sorted(polished, c0.abs().max(c1.abs()).max(c2.abs()).max(c3.abs()))
}

/// All real roots of `c4 y^4 + c3 y^3 + c2 y^2 + c1 y + c0 = 0`, each polished
/// against the original polynomial. Lower-degree cases are dispatched to the
/// dedicated solvers when leading coefficients vanish relative to the rest.
pub fn solve_quartic(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let coeffs = [c4, c3, c2, c1, c0];
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Vec::new();
    }
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    if c4.abs() <= 1e-14 * scale {
        return solve_cubic(c3, c2, c1, c0);
    }
    let b = c3 / c4;
    let c = c2 / c4;
    let d = c1 / c4;
    let e = c0 / c4;
    // Depressed quartic y = x - b/4: x^4 + p x^2 + q x + r.
    let b2 = b * b;
    let p = c - 3.0 * b2 / 8.0;
    let q = d - b * c / 2.0 + b2 * b / 8.0;
    let r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;
    let shift = -b / 4.0;
    let mut roots = Vec::new();
    let dep_scale = p.abs().max(q.abs()).max(r.abs()).max(1.0);
    if q.abs() <= 1e-12 * dep_scale {
        // Biquadratic.
        for z in solve_quadratic(1.0, p, r) {
            if z > 0.0 {
                roots.push(z.sqrt() + shift);
                roots.push(-z.sqrt() + shift);
            } else if z > -1e-12 * dep_scale {
                roots.push(shift);
            }
        }
    } else {
        // Ferrari: resolvent cubic m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0.
        let res = solve_cubic(1.0, p, p * p / 4.0 - r, -q * q / 8.0);
        let m = res
            .iter()
            .copied()
            .filter(|&m| m > 0.0)
            .fold(f64::NAN, |best: f64, m| if best.is_nan() || m > best { m } else { best });
        if m.is_finite() && m > 0.0 {
            let s = (2.0 * m).sqrt();
            let t1 = p / 2.0 + m - q / (2.0 * s);
            let t2 = p / 2.0 + m + q / (2.0 * s);
            for x in solve_quadratic(1.0, s, t1) {
                roots.push(x + shift);
            }
            for x in solve_quadratic(1.0, -s, t2) {
                roots.push(x + shift);
            }
        } else {
            // Resolvent found no positive root (heavily multiple roots);
            // fall back to the stationary-point bisection sweep.
            return bisection_roots(&coeffs);
        }
    }
    let polished: Vec<f64> = roots.into_iter().map(|x| polish(&coeffs, x)).collect();
    let mut out = dedupe_sorted(polished, scale / c4.abs());
    // Keep only polished values that actually satisfy the polynomial.
    out.retain(|&x| {
        let xs = x.abs().max(1.0);
        eval_poly(&coeffs, x).abs() <= 1e-6 * scale * xs * xs * xs * xs
    });
    if out.is_empty() {
        let swept = bisection_roots(&coeffs);
        if !swept.is_empty() {
            return swept;
        }
    }
    out
}

/// Root sweep between stationary points: brackets every simple real root and
/// the odd-multiplicity ones; even-multiplicity roots are caught by checking
/// the stationary values themselves.
fn bisection_roots(coeffs: &[f64; 5]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    // Cauchy bound for |root|.
    let bound = 1.0 + coeffs[1..].iter().map(|c| c.abs()).fold(0.0, f64::max) / coeffs[0].abs();
    let mut knots = vec![-bound, bound];
    knots.extend(solve_cubic(
        4.0 * coeffs[0],
        3.0 * coeffs[1],
        2.0 * coeffs[2],
        coeffs[3],
    ));
    knots.retain(|k| k.is_finite() && k.abs() <= bound);
    knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval_poly(coeffs, lo), eval_poly(coeffs, hi));
        if flo.abs() <= 1e-8 * scale {
            roots.push(lo);
        }
        if fhi.abs() <= 1e-8 * scale {
            roots.push(hi);
        }
        if flo * fhi >= 0.0 {
            continue;
        }
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            let fm = eval_poly(coeffs, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm * flo < 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        roots.push(polish(coeffs, 0.5 * (lo + hi)));
    }
    dedupe_sorted(roots, scale / coeffs[0].abs())
}
