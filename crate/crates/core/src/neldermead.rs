//! Bounded derivative-free simplex minimization with restarts.
//!
//! Box bounds are enforced through a smooth change of variables: each free
//! coordinate is represented by an unbounded internal variable `u` with
//! `x = lo + (hi − lo)·sin²(u)`. The simplex moves in u-space, so every
//! point handed to the objective satisfies the bounds exactly, and the
//! transformation stays smooth where clipping would kink the landscape.
//! Coordinates with `lo == hi` are frozen and never enter the search space.

use crate::error::{Error, Result};

/// Standard simplex coefficients: reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5.
const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Initial simplex perturbation: 5% of each transformed coordinate,
/// 0.00025 absolute where the coordinate is zero.
const INITIAL_STEP_REL: f64 = 0.05;
const INITIAL_STEP_ABS: f64 = 0.00025;

/// Box bounds; `lower[i] == upper[i]` freezes coordinate i.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::invalid(format!(
                "bound vectors must be non-empty and equally long, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::invalid(format!(
                    "bound {i} must satisfy lower <= upper with finite values, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.lower[i] == self.upper[i]
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }
}

/// Termination and restart settings.
#[derive(Debug, Clone)]
pub struct Options {
    /// Additional runs after the first, each initialized at the previous
    /// optimum.
    pub restarts: usize,
    /// Evaluation budget per run; `None` means 400·d.
    pub max_evals_per_run: Option<usize>,
    /// Relative simplex diameter below which a run stops.
    pub diameter_tolerance: f64,
    /// Relative value spread below which a run stops.
    pub value_tolerance: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            restarts: 3,
            max_evals_per_run: None,
            diameter_tolerance: 1e-8,
            value_tolerance: 1e-10,
        }
    }
}

/// Outcome of one simplex run.
#[derive(Debug, Clone)]
pub struct RunDiagnostics {
    pub best_value: f64,
    pub evaluations: usize,
    /// False when the run stopped on its evaluation budget.
    pub converged: bool,
}

/// Best point found across all runs.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub runs: Vec<RunDiagnostics>,
    /// True when the final run converged on its tolerances.
    pub converged: bool,
}

/// Map an internal coordinate to its bounded value.
fn to_bounded(u: f64, lo: f64, hi: f64) -> f64 {
    let s = u.sin();
    (lo + (hi - lo) * s * s).clamp(lo, hi)
}

/// Inverse transform used for the start point.
fn to_internal(x: f64, lo: f64, hi: f64) -> f64 {
    let ratio = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
    ratio.sqrt().asin()
}

/// Minimize `objective` over the box `bounds`, starting near `start`
/// (clamped into the box), running `1 + restarts` sequential simplex runs.
/// Objective values of NaN are treated as +∞, rejecting the vertex.
pub fn minimize(
    mut objective: impl FnMut(&[f64]) -> f64,
    bounds: &Bounds,
    start: &[f64],
    options: &Options,
) -> Result<Minimum> {
    if start.len() != bounds.dimension() {
        return Err(Error::invalid(format!(
            "start has dimension {}, bounds have {}",
            start.len(),
            bounds.dimension()
        )));
    }
    let free: Vec<usize> = (0..bounds.dimension())
        .filter(|&i| !bounds.is_frozen(i))
        .collect();

    // template holding frozen coordinates at their fixed values
    let mut x_template: Vec<f64> = start.to_vec();
    bounds.clamp(&mut x_template);

    let mut eval = |u: &[f64], template: &mut Vec<f64>| -> f64 {
        for (j, &i) in free.iter().enumerate() {
            template[i] = to_bounded(u[j], bounds.lower[i], bounds.upper[i]);
        }
        let v = objective(template);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let d = free.len();
    if d == 0 {
        let value = eval(&[], &mut x_template);
        return Ok(Minimum {
            point: x_template,
            value,
            evaluations: 1,
            runs: vec![RunDiagnostics {
                best_value: value,
                evaluations: 1,
                converged: true,
            }],
            converged: true,
        });
    }

    let max_evals = options.max_evals_per_run.unwrap_or(400 * d);
    let mut u_best: Vec<f64> = free
        .iter()
        .map(|&i| to_internal(x_template[i], bounds.lower[i], bounds.upper[i]))
        .collect();
    let mut f_best = f64::INFINITY;
    let mut runs = Vec::with_capacity(1 + options.restarts);
    let mut converged = false;
    let mut evaluations = 0usize;

    for _ in 0..=options.restarts {
        let (u, f, run_converged, run_evals) = simplex_run(
            &mut eval,
            &mut x_template,
            &u_best,
            f_best,
            max_evals,
            options,
        );
        if f <= f_best {
            u_best = u;
            f_best = f;
        }
        converged = run_converged;
        evaluations += run_evals;
        runs.push(RunDiagnostics {
            best_value: f_best,
            evaluations: run_evals,
            converged: run_converged,
        });
    }

    for (j, &i) in free.iter().enumerate() {
        x_template[i] = to_bounded(u_best[j], bounds.lower[i], bounds.upper[i]);
    }
    Ok(Minimum {
        point: x_template.clone(),
        value: f_best,
        evaluations,
        runs,
        converged,
    })
}

/// One Nelder-Mead run from `u_start`; returns the best vertex, its value,
/// the convergence flag and the number of evaluations spent.
fn simplex_run(
    eval: &mut impl FnMut(&[f64], &mut Vec<f64>) -> f64,
    template: &mut Vec<f64>,
    u_start: &[f64],
    f_start_hint: f64,
    max_evals: usize,
    options: &Options,
) -> (Vec<f64>, f64, bool, usize) {
    let d = u_start.len();
    let mut evals_used = 0usize;
    let mut budget_eval = |u: &[f64], template: &mut Vec<f64>, evals_used: &mut usize| -> f64 {
        *evals_used += 1;
        eval(u, template)
    };

    // initial simplex: start plus one perturbed vertex per coordinate
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    let mut values: Vec<f64> = Vec::with_capacity(d + 1);
    vertices.push(u_start.to_vec());
    let f0 = if f_start_hint.is_finite() {
        f_start_hint
    } else {
        budget_eval(u_start, template, &mut evals_used)
    };
    values.push(f0);
    for j in 0..d {
        let mut v = u_start.to_vec();
        v[j] = if v[j] != 0.0 {
            v[j] * (1.0 + INITIAL_STEP_REL)
        } else {
            INITIAL_STEP_ABS
        };
        let f = budget_eval(&v, template, &mut evals_used);
        vertices.push(v);
        values.push(f);
    }
    sort_simplex(&mut vertices, &mut values);

    let mut converged = false;
    while evals_used < max_evals {
        if is_converged(&vertices, &values, options) {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; d];
        for v in vertices.iter().take(d) {
            for (c, &vj) in centroid.iter_mut().zip(v) {
                *c += vj;
            }
        }
        for c in centroid.iter_mut() {
            *c /= d as f64;
        }

        let worst = vertices[d].clone();
        let f_worst = values[d];
        let f_best = values[0];
        let f_second_worst = values[d - 1];

        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(&c, &w)| c + REFLECTION * (c - w))
            .collect();
        let f_reflected = budget_eval(&reflected, template, &mut evals_used);

        if f_reflected < f_best {
            let expanded: Vec<f64> = centroid
                .iter()
                .zip(&reflected)
                .map(|(&c, &r)| c + EXPANSION * (r - c))
                .collect();
            let f_expanded = budget_eval(&expanded, template, &mut evals_used);
            if f_expanded < f_reflected {
                vertices[d] = expanded;
                values[d] = f_expanded;
            } else {
                vertices[d] = reflected;
                values[d] = f_reflected;
            }
        } else if f_reflected < f_second_worst {
            vertices[d] = reflected;
            values[d] = f_reflected;
        } else {
            // contract outside toward the reflection or inside toward the worst
            let (target, f_target) = if f_reflected < f_worst {
                (&reflected, f_reflected)
            } else {
                (&worst, f_worst)
            };
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(target)
                .map(|(&c, &t)| c + CONTRACTION * (t - c))
                .collect();
            let f_contracted = budget_eval(&contracted, template, &mut evals_used);
            if f_contracted < f_target {
                vertices[d] = contracted;
                values[d] = f_contracted;
            } else {
                // shrink toward the best vertex
                let best = vertices[0].clone();
                for i in 1..=d {
                    for (vj, &bj) in vertices[i].iter_mut().zip(&best) {
                        *vj = bj + SHRINK * (*vj - bj);
                    }
                    let v = vertices[i].clone();
                    values[i] = budget_eval(&v, template, &mut evals_used);
                }
            }
        }
        sort_simplex(&mut vertices, &mut values);
    }

    (vertices[0].clone(), values[0], converged, evals_used)
}

fn sort_simplex(vertices: &mut [Vec<f64>], values: &mut [f64]) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_vertices: Vec<Vec<f64>> = order.iter().map(|&i| vertices[i].clone()).collect();
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    for (i, (v, f)) in sorted_vertices.into_iter().zip(sorted_values).enumerate() {
        vertices[i] = v;
        values[i] = f;
    }
}

fn is_converged(vertices: &[Vec<f64>], values: &[f64], options: &Options) -> bool {
    let best = &vertices[0];
    let scale = best.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1.0);
    let diameter = vertices[1..]
        .iter()
        .flat_map(|v| v.iter().zip(best).map(|(&a, &b)| (a - b).abs()))
        .fold(0.0f64, f64::max);
    let f_scale = values[0].abs().max(1.0);
    let spread = values[values.len() - 1] - values[0];
    diameter <= options.diameter_tolerance * scale
        && spread.abs() <= options.value_tolerance * f_scale
}
