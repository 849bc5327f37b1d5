use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::codes::max_doubly_even_dim;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Stabilizer,
    Qrc { q: usize },
    Hardened { m0: usize, d0: usize, t: usize },
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::Stabilizer => write!(f, "stabilizer"),
            SchemeKind::Qrc { q } => write!(f, "qrc(q={q})"),
            SchemeKind::Hardened { m0, d0, t } => write!(f, "hardened(m0={m0},d0={d0},t={t})"),
        }
    }
}

/// Shape parameters of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeMeta {
    pub n: usize,
    pub m: usize,
    pub g: usize,
    /// Rows of `H_s`.
    pub m1: usize,
    /// `dim D_s`.
    pub d: usize,
    pub scheme: SchemeKind,
    pub lambda: usize,
    pub seed: Option<u64>,
}

impl SchemeMeta {
    /// `r = dim C_s = g + d`.
    pub fn r(&self) -> usize {
        self.g + self.d
    }

    pub fn m2(&self) -> usize {
        self.m - self.m1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// Needed for any `(H, s)` pair with these dimensions to exist.
    Structural,
    /// Keeps the known attacks at `≳ 2^λ` work.
    Security,
    /// Blocks the Radical Attack (`m₂ ≥ n − g`).
    Radical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCheck {
    pub name: &'static str,
    pub kind: CheckKind,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamReport {
    pub checks: Vec<ParamCheck>,
}

impl ParamReport {
    fn all(&self, kind: CheckKind) -> bool {
        self.checks.iter().filter(|c| c.kind == kind).all(|c| c.holds)
    }

    pub fn structural_ok(&self) -> bool {
        self.all(CheckKind::Structural)
    }

    pub fn security_ok(&self) -> bool {
        self.all(CheckKind::Security)
    }

    pub fn radical_guard_ok(&self) -> bool {
        self.all(CheckKind::Radical)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

/// Evaluates every structural, security and Radical-guard inequality.
pub fn check_params(meta: &SchemeMeta) -> ParamReport {
    let [n, m, g, m1, d, lambda] = [meta.n, meta.m, meta.g, meta.m1, meta.d, meta.lambda].map(|x| x as i64);
    let r = g + d;
    let m2 = m - m1;
    use CheckKind::*;
    let checks = vec![
        ("g+d<=n", Structural, g + d <= n),
        ("0<m1<=m", Structural, 0 < m1 && m1 <= m),
        ("n-g-d<=m-m1", Structural, n - g - d <= m2),
        ("g+2d<=m1", Structural, g + 2 * d <= m1),
        ("m1=g mod 2", Structural, (m1 - g).rem_euclid(2) == 0),
        ("m1<=n-2lambda+r", Security, m1 <= n - 2 * lambda + r),
        ("m1+n-r<=m", Security, m1 + n - r <= m),
        ("m<=2(n-lambda)", Security, m <= 2 * (n - lambda)),
        ("m2>=n-g", Radical, m2 >= n - g),
    ];
    ParamReport {
        checks: checks
            .into_iter()
            .map(|(name, kind, holds)| ParamCheck { name, kind, holds })
            .collect(),
    }
}

/// Extra requirements beyond the inequalities: `D` must fit in a doubly-even
/// code of length `m1`, and `g = 0` needs the all-ones vector in `D`.
pub(crate) fn sampler_feasible(g: usize, m1: usize, d: usize) -> bool {
    if d > max_doubly_even_dim(m1) {
        return false;
    }
    g > 0 || (d > 0 && m1.is_multiple_of(4))
}

/// Uniform draw over the `(m1, d)` pairs satisfying the structural and
/// security inequalities.
pub fn sample_params<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    g: usize,
    lambda: usize,
    rng: &mut R,
) -> Result<SchemeMeta> {
    let base = SchemeMeta {
        n,
        m,
        g,
        m1: 0,
        d: 0,
        scheme: SchemeKind::Stabilizer,
        lambda,
        seed: None,
    };
    let mut feasible = Vec::new();
    let mut blockers: HashMap<&'static str, usize> = HashMap::new();
    for m1 in 1..=m {
        for d in 0..=m1 / 2 {
            let meta = SchemeMeta { m1, d, ..base.clone() };
            let report = check_params(&meta);
            let failing: Vec<&'static str> = report
                .checks
                .iter()
                .filter(|c| c.kind != CheckKind::Radical && !c.holds)
                .map(|c| c.name)
                .collect();
            match failing.as_slice() {
                [] if sampler_feasible(g, m1, d) => feasible.push((m1, d)),
                [] => *blockers.entry("doubly-even D of this size does not exist").or_default() += 1,
                [only] => *blockers.entry(only).or_default() += 1,
                _ => {}
            }
        }
    }
    if feasible.is_empty() {
        let mut blockers: Vec<_> = blockers.into_iter().collect();
        blockers.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let constraint = if (m as i64) > 2 * (n as i64 - lambda as i64) {
            "m<=2(n-lambda)".to_string()
        } else if let Some((name, _)) = blockers.first() {
            (*name).to_string()
        } else {
            "structural constraints (no (m1, d) pair)".to_string()
        };
        return Err(Error::Infeasible { constraint });
    }
    let (m1, d) = feasible[rng.random_range(0..feasible.len())];
    Ok(SchemeMeta { m1, d, ..base })
}
