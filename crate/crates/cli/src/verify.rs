use clap::ValueEnum;
use nalgebra::DMatrix;
use wfa_aak::fock::{
    flipped_symbol_coefficients, free_group_counterexample, hankel_equation_columns,
    multiplier_from_flipped_symbol, nc_rational_eval, random_contractive_substitution,
    verify_hankel_equation, verify_multiplier_intertwining, verify_shift_inequalities,
    NcRationalRealization,
};
use wfa_aak::{random_stable_wfa, spectral_norm, Wfa, Word};

use crate::{CliError, WfaDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    HankelEq,
    Shifts,
    FreeGroup,
    NcRational,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::HankelEq => "hankel-eq",
            Suite::Shifts => "shifts",
            Suite::FreeGroup => "free-group",
            Suite::NcRational => "nc-rational",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub degree: usize,
    pub seed: u64,
    /// Alphabet size for random fixtures and the shift suite.
    pub alphabet_size: usize,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suite: Suite::All,
            degree: 5,
            seed: 0,
            alphabet_size: 2,
            trials: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub pass: bool,
    pub lines: Vec<String>,
}

const RANDOM_STATES: usize = 3;
const SERIES_DEGREE: usize = 8;
const SUBSTITUTIONS: u64 = 20;

struct Fixture {
    wfa: Wfa,
    label: String,
    labels: Vec<String>,
}

fn fixture(doc: Option<&WfaDocument>, opts: &VerifyOptions) -> Result<Fixture, CliError> {
    match doc {
        Some(doc) => Ok(Fixture {
            wfa: doc.to_wfa()?,
            label: doc.name.clone().unwrap_or_else(|| "file".into()),
            labels: doc.alphabet.clone(),
        }),
        None => {
            let d = opts.alphabet_size;
            Ok(Fixture {
                wfa: random_stable_wfa(d, RANDOM_STATES, opts.seed, 0.9)?,
                label: format!("random (d={d}, n={RANDOM_STATES}, seed={})", opts.seed),
                labels: (0..d).map(default_label).collect(),
            })
        }
    }
}

fn default_label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("s{i}")
    }
}

fn hankel_eq(fx: &Fixture, degree: usize) -> Result<SuiteResult, CliError> {
    let f = &fx.wfa;
    let report = verify_hankel_equation(f, degree)?;
    let mut lines = vec![
        format!("automaton: {}", fx.label),
        format!(
            "interior: {} entries per symbol at degree {degree}",
            report.entries_compared
        ),
    ];
    for (label, disc) in fx.labels.iter().zip(&report.per_symbol) {
        lines.push(format!("max |H S_{label} - R_{label}^* H| = {disc:e}"));
    }
    let mut pass = report.holds();

    let phi = flipped_symbol_coefficients(f, degree)?;
    let inter = verify_multiplier_intertwining(&multiplier_from_flipped_symbol(&phi))?;
    lines.push(format!(
        "flipped-symbol multiplier: max |U M S_a - S_a U M| = {:e}",
        inter.max_discrepancy()
    ));
    pass &= inter.max_discrepancy() == 0.0;

    if f.alphabet_size() >= 2 && degree >= 3 {
        let (a, b) = (&fx.labels[0], &fx.labels[1]);
        let (lhs, rhs) = hankel_equation_columns(f, 0, &Word::new(vec![1, 0]), degree)?;
        let expect: Vec<f64> = [vec![0, 1, 0], vec![0, 0, 1, 0], vec![1, 0, 1, 0]]
            .into_iter()
            .map(|w| f.evaluate(&Word::new(w)))
            .collect::<Result<_, _>>()?;
        let ok = lhs == rhs && lhs[..3] == expect[..];
        lines.push(format!(
            "column e_{b}{a}: H S_{a} = R_{a}^* H = (f({a}{b}{a}), f({a}{a}{b}{a}), f({b}{a}{b}{a}), …) = ({}, {}, {}, …): {}",
            lhs[0],
            lhs[1],
            lhs[2],
            if ok { "match" } else { "MISMATCH" }
        ));
        pass &= ok;
    }
    Ok(SuiteResult {
        suite: Suite::HankelEq.name(),
        pass,
        lines,
    })
}

fn shifts(opts: &VerifyOptions) -> Result<SuiteResult, CliError> {
    let r = verify_shift_inequalities(opts.alphabet_size, opts.degree, opts.trials, opts.seed)?;
    let tol = 1e-12;
    let mut lines = vec![
        format!(
            "d={}, degree {}, {} trials, seed {}",
            r.alphabet_size, r.degree, r.trials, opts.seed
        ),
        format!(
            "(a) max |‖Σ S_i y_i‖² − Σ‖y_i‖²| = {:e} (tol {tol:e})",
            r.max_deviation_a
        ),
        format!(
            "(b) max |‖Σ R̄_i h_i‖² − Σ‖h_i‖²| for h_i in the positive part = {:e} (tol {tol:e})",
            r.max_deviation_b
        ),
        format!(
            "info: with negative components, max (‖Σ R̄_i h_i‖² − Σ‖h_i‖²) = {:e}",
            r.full_space_max_excess
        ),
    ];
    if let Some((l, rr)) = r.overlap_witness {
        lines.push(format!(
            "info: h_1 = e⁻_a, h_2 = e⁻_b both shift onto e_ε: {l} vs {rr} (inequality fails on the negative part)"
        ));
    }
    Ok(SuiteResult {
        suite: Suite::Shifts.name(),
        pass: r.passes(tol),
        lines,
    })
}

fn free_group() -> SuiteResult {
    let r = free_group_counterexample();
    let show = |c: &wfa_aak::fock::InequalityCase| {
        let rel = if c.lhs > c.rhs {
            ">"
        } else if c.lhs == c.rhs {
            "="
        } else {
            "<"
        };
        format!("{}: ‖R̄₁h₁ + R̄₂h₂‖² = {} {rel} {} = ‖h₁‖² + ‖h₂‖²", c.label, c.lhs, c.rhs)
    };
    SuiteResult {
        suite: Suite::FreeGroup.name(),
        pass: r.exhibits_violation(),
        lines: vec![
            show(&r.counterexample),
            show(&r.monoid_contrast),
            show(&r.degenerate),
            format!(
                "violation exhibited: {} > {}",
                r.counterexample.lhs, r.counterexample.rhs
            ),
        ],
    }
}

fn nc_rational(fx: &Fixture, seed: u64) -> Result<SuiteResult, CliError> {
    let f = &fx.wfa;
    let d = f.alphabet_size();
    let r = NcRationalRealization::from_wfa(f);
    // ‖Σ A_j ⊗ z_j‖² <= Σ‖A_j‖² · Σ‖z_j‖² = 1/2
    let gram = 0.5 / f.transition_norm_sq_sum()?.max(1e-12);
    let mut worst = 0.0f64;
    let mut outside = 0;
    let mut zero_exact = true;
    for t in 0..SUBSTITUTIONS {
        let m = 1 + (t % 2) as usize;
        let z = random_contractive_substitution(d, m, gram, seed.wrapping_add(t))?;
        let exact = nc_rational_eval(&r, &z)?;
        let series = r.truncated_series(&z, SERIES_DEGREE)?;
        let bound = r.tail_bound(&z, SERIES_DEGREE)?;
        let gap = spectral_norm(&(exact - series))?;
        if !(gap <= bound) {
            outside += 1;
        }
        worst = worst.max(gap / bound);
        let at_zero = nc_rational_eval(&r, &vec![DMatrix::zeros(m, m); d])?;
        let ctb = f.evaluate(&Word::empty())?;
        zero_exact &= (0..m).all(|p| (0..m).all(|q| at_zero[(p, q)] == if p == q { ctb } else { 0.0 }));
    }
    Ok(SuiteResult {
        suite: Suite::NcRational.name(),
        pass: outside == 0 && zero_exact,
        lines: vec![
            format!("automaton: {}", fx.label),
            format!(
                "{SUBSTITUTIONS} substitutions (m = 1, 2), Σ‖z_i‖² = {gram:e}: \
                 {outside} outside the degree-{SERIES_DEGREE} tail bound, max gap/bound = {worst:e}"
            ),
            format!("z = 0 returns c^T b exactly: {zero_exact}"),
        ],
    })
}

/// Runs the selected suites in a fixed order.
pub fn run_suites(doc: Option<&WfaDocument>, opts: &VerifyOptions) -> Result<Vec<SuiteResult>, CliError> {
    if opts.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let wants = |s: Suite| opts.suite == s || opts.suite == Suite::All;
    let mut out = Vec::new();
    let needs_fixture = wants(Suite::HankelEq) || wants(Suite::NcRational);
    let fx = if needs_fixture { Some(fixture(doc, opts)?) } else { None };
    if wants(Suite::HankelEq) {
        out.push(hankel_eq(fx.as_ref().unwrap(), opts.degree)?);
    }
    if wants(Suite::Shifts) {
        out.push(shifts(opts)?);
    }
    if wants(Suite::FreeGroup) {
        out.push(free_group());
    }
    if wants(Suite::NcRational) {
        out.push(nc_rational(fx.as_ref().unwrap(), opts.seed)?);
    }
    Ok(out)
}

/// Text report; `timestamp` adds a leading line (omit it for byte-identical output).
pub fn render_report(results: &[SuiteResult], timestamp: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(ts) = timestamp {
        s += &format!("generated: {ts}\n");
    }
    for r in results {
        s += &format!("suite {}: {}\n", r.suite, if r.pass { "PASS" } else { "FAIL" });
        for line in &r.lines {
            s += &format!("  {line}\n");
        }
    }
    let all = results.iter().all(|r| r.pass);
    s += &format!("overall: {}\n", if all { "PASS" } else { "FAIL" });
    s
}
