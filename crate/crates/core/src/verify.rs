//! Exact invariant suites run by `resind verify`.
//!
//! Every identity is checked in exact rational arithmetic and reported
//! separately, one [`VerifyReport`] per identity and group.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chain::{
    verify_detailed_balance, verify_explicit_entries, verify_spectrum, ChainMatrices, VerifyReport,
};
use crate::characters::{
    cycle_character, sigma_k, wreath_normalized_character, ClassType, MAX_ROWS,
};
use crate::diagram::{MultiDiagram, YoungDiagram};
use crate::error::{Error, Result};
use crate::evolution::{PresetKind, PresetParams};
use crate::freeprob::{cumulants_to_moments, moments_to_cumulants, CumulantSeq};
use crate::group::FiniteGroupTable;
use crate::scalar::{factorial, fmt_exact_complex, fmt_rational, ExactComplex};
use crate::thoma::{character_value, thoma_measure, ThomaFamily};

/// Sizes and groups for the exact suites.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Groups with the largest `n` for the chain and single-cycle suites.
    pub targets: Vec<(FiniteGroupTable, usize)>,
    /// Largest `n` for the branching identities.
    pub branching_cap: usize,
    /// Largest `n` for `sum (dim lambda)^2 = n! |T|^n`.
    pub plancherel_cap: usize,
    /// Largest `n` for orthogonality of wreath characters.
    pub orthogonality_cap: usize,
    /// Largest `|nu|` for `Sigma_2(nu) = R_3(m_nu)`.
    pub sigma_cap: usize,
    /// Order of the non-crossing brute force.
    pub noncrossing_order: usize,
    /// Values of `n` at which Thoma families are checked.
    pub thoma_sizes: Vec<u64>,
    /// Test hook: perturbs one transition probability so the chain suite must fail.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            targets: vec![
                (FiniteGroupTable::trivial(), 5),
                (
                    FiniteGroupTable::cyclic(2).expect("cyclic(2) is builtin"),
                    5,
                ),
                (FiniteGroupTable::s3(), 3),
                (FiniteGroupTable::dihedral4(), 3),
            ],
            branching_cap: 8,
            plancherel_cap: 6,
            orthogonality_cap: 4,
            sigma_cap: 10,
            noncrossing_order: 7,
            thoma_sizes: vec![16, 100, 10_000],
            inject_fault: false,
        }
    }
}

impl VerifyConfig {
    /// A single group checked up to `n` in every size-indexed suite.
    pub fn single(table: FiniteGroupTable, n: usize) -> Result<Self> {
        table.require_exact()?;
        if n == 0 {
            return Err(Error::InvalidArgument("verify needs n >= 1".into()));
        }
        let base = VerifyConfig::default();
        Ok(VerifyConfig {
            targets: vec![(table, n)],
            branching_cap: base.branching_cap.max(n),
            plancherel_cap: base.plancherel_cap.max(n),
            orthogonality_cap: n.min(MAX_ROWS),
            ..base
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::InvalidArgument(
                "verify needs at least one group".into(),
            ));
        }
        for (t, n) in &self.targets {
            t.require_exact()?;
            if *n == 0 {
                return Err(Error::InvalidArgument(format!(
                    "cap for {} must be >= 1",
                    t.name()
                )));
            }
        }
        if self.orthogonality_cap > MAX_ROWS {
            return Err(Error::TooManyRows {
                rows: self.orthogonality_cap,
                cap: MAX_ROWS,
            });
        }
        Ok(())
    }
}

/// Outcome of all suites.
#[derive(Debug, Default)]
pub struct VerifySummary {
    pub reports: Vec<VerifyReport>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerifyReport::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &VerifyReport> {
        self.reports.iter().filter(|r| !r.passed())
    }
}

pub fn run_all(config: &VerifyConfig) -> Result<VerifySummary> {
    config.validate()?;
    let mut summary = VerifySummary::default();
    summary.reports.extend(chain_suite(config)?);
    summary.reports.extend(character_suite(config)?);
    summary.reports.extend(freeprob_suite(config));
    summary.reports.extend(thoma_suite(config)?);
    Ok(summary)
}

fn labelled(name: &str, table: &FiniteGroupTable, n: usize) -> VerifyReport {
    VerifyReport::new(format!("{name} [{}, n <= {n}]", table.name()))
}

pub fn chain_suite(config: &VerifyConfig) -> Result<Vec<VerifyReport>> {
    let mut out = Vec::new();
    for (table, cap) in &config.targets {
        let mut stoch = labelled("rows of P_down, P_up, P sum to 1", table, *cap);
        let mut stationary = labelled("Plancherel weights sum to 1", table, *cap);
        let mut balance = labelled("detailed balance", table, *cap);
        let mut explicit = labelled("explicit entries equal P_down P_up", table, *cap);
        let mut spectrum = labelled("eigen-identity for every class type", table, *cap);
        for n in 1..=*cap {
            let mut cm = ChainMatrices::build_with_cap(
                n,
                table,
                (*cap).max(crate::chain::DEFAULT_STATE_CAP),
            )?;
            if config.inject_fault && n == *cap && cm.states.len() > 1 {
                let v = cm.p.get(0, 1) + BigRational::new(1.into(), 1000.into());
                cm.p.set(0, 1, v);
            }
            let bad = cm.stochasticity_violations();
            stoch.check(bad.is_empty(), || format!("n = {n}: {}", bad.join("; ")));
            let total: BigRational = cm.stationary.iter().cloned().sum();
            stationary.check(total.is_one(), || {
                format!("n = {n}: total {}", fmt_rational(&total))
            });
            balance.merge(prefixed(verify_detailed_balance(&cm), n));
            explicit.merge(prefixed(verify_explicit_entries(&cm)?, n));
            spectrum.merge(prefixed(verify_spectrum(&cm)?, n));
        }
        out.extend([stoch, stationary, balance, explicit, spectrum]);
        out.push(branching(table, config.branching_cap));
        out.push(plancherel_normalization(table, config.plancherel_cap));
    }
    Ok(out)
}

fn prefixed(mut r: VerifyReport, n: usize) -> VerifyReport {
    for f in &mut r.failures {
        *f = format!("n = {n}: {f}");
    }
    r
}

/// `sum_{nu < lambda} dim zeta dim nu = dim lambda` and
/// `sum_{mu > nu} dim zeta dim mu = n |T| dim nu`.
fn branching(table: &FiniteGroupTable, cap: usize) -> VerifyReport {
    let mut report = labelled("branching identities", table, cap);
    let k = table.num_irreps();
    for n in 1..=cap {
        for lambda in MultiDiagram::enumerate(n, k) {
            let down: BigInt = lambda
                .cells()
                .iter()
                .map(|(nu, z)| BigInt::from(table.dim(*z)) * nu.dim(table))
                .sum();
            let d = lambda.dim(table);
            report.check(down == d, || {
                format!("restriction of {lambda}: {down} != {d}")
            });
        }
        for nu in MultiDiagram::enumerate(n - 1, k) {
            let up: BigInt = nu
                .covers()
                .iter()
                .map(|(mu, z)| BigInt::from(table.dim(*z)) * mu.dim(table))
                .sum();
            let expected = BigInt::from(n as u64 * table.order()) * nu.dim(table);
            report.check(up == expected, || {
                format!("induction of {nu}: {up} != {expected}")
            });
        }
    }
    report
}

fn plancherel_normalization(table: &FiniteGroupTable, cap: usize) -> VerifyReport {
    let mut report = labelled("sum of squared dimensions is n! |T|^n", table, cap);
    for n in 0..=cap {
        let total: BigInt = MultiDiagram::enumerate(n, table.num_irreps())
            .iter()
            .map(|l| l.dim(table).pow(2))
            .sum();
        let expected = factorial(n as u64) * BigInt::from(table.order()).pow(n as u32);
        report.check(total == expected, || {
            format!("n = {n}: {total} != {expected}")
        });
    }
    report
}

fn conj(z: &ExactComplex) -> ExactComplex {
    ExactComplex::new(z.re.clone(), -z.im.clone())
}

pub fn character_suite(config: &VerifyConfig) -> Result<Vec<VerifyReport>> {
    let mut out = Vec::new();
    for (table, cap) in &config.targets {
        let mut cycles = labelled("single-cycle formula equals the row sum", table, *cap);
        for n in 1..=*cap {
            for lambda in MultiDiagram::enumerate(n, table.num_irreps()) {
                for k in 1..=n {
                    for theta in 0..table.num_classes() {
                        let rho = ClassType::cycle(k, theta, table.num_classes());
                        let a = cycle_character(&lambda, k, theta, table)?;
                        let b = wreath_normalized_character(&lambda, &rho, table)?;
                        cycles.check(a == b, || {
                            format!(
                                "{lambda} at {rho}: {} vs {}",
                                fmt_exact_complex(&a),
                                fmt_exact_complex(&b)
                            )
                        });
                    }
                }
            }
        }
        out.push(cycles);
        if table.num_irreps() <= 2 {
            out.push(orthogonality(table, config.orthogonality_cap)?);
        }
    }
    let mut kerov = VerifyReport::new(format!(
        "Sigma_2(nu) = R_3(m_nu) and R_2(m_nu) = |nu| [|nu| <= {}]",
        config.sigma_cap
    ));
    for n in 1..=config.sigma_cap {
        for nu in YoungDiagram::partitions(n) {
            let r = nu.transition_measure::<BigRational>().free_cumulants(3);
            let s = sigma_k(2, &nu);
            kerov.check(s == r.get(3), || {
                format!(
                    "{nu}: Sigma_2 = {}, R_3 = {}",
                    fmt_rational(&s),
                    fmt_rational(&r.get(3))
                )
            });
            let size = BigRational::from_integer(n.into());
            kerov.check(r.get(2) == size && r.get(1).is_zero(), || {
                format!("{nu}: R_1 = {}, R_2 = {}", r.get(1), r.get(2))
            });
        }
    }
    out.push(kerov);
    Ok(out)
}

/// `sum_rho |C_rho| chi^lambda(rho) conj chi^mu(rho) = n! |T|^n delta`.
fn orthogonality(table: &FiniteGroupTable, cap: usize) -> Result<VerifyReport> {
    let mut report = labelled("orthogonality of wreath characters", table, cap);
    for n in 1..=cap {
        let irreps = MultiDiagram::enumerate(n, table.num_irreps());
        let classes = ClassType::enumerate(n, table.num_classes());
        let sizes: Vec<BigRational> = classes.iter().map(|c| c.class_size(table)).collect();
        let chars = irreps
            .iter()
            .map(|l| {
                let d = BigRational::from_integer(l.dim(table));
                classes
                    .iter()
                    .map(|rho| wreath_normalized_character(l, rho, table).map(|v| v * d.clone()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let order = BigRational::from_integer(
            factorial(n as u64) * BigInt::from(table.order()).pow(n as u32),
        );
        for i in 0..irreps.len() {
            for j in i..irreps.len() {
                let mut acc = ExactComplex::zero();
                for (c, s) in sizes.iter().enumerate() {
                    acc += chars[i][c].clone() * conj(&chars[j][c]) * s.clone();
                }
                let expected = if i == j {
                    order.clone()
                } else {
                    BigRational::zero()
                };
                report.check(acc.im.is_zero() && acc.re == expected, || {
                    format!(
                        "<{}, {}> = {}",
                        irreps[i],
                        irreps[j],
                        fmt_exact_complex(&acc)
                    )
                });
            }
        }
    }
    Ok(report)
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            rec(prefix, max.max(b), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        let mut prefix = vec![0];
        rec(&mut prefix, 0, n, &mut out);
    }
    out
}

fn is_noncrossing(blocks: &[usize]) -> bool {
    let n = blocks.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if blocks[a] == blocks[c] && blocks[b] == blocks[d] && blocks[a] != blocks[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `M_k = sum_{pi in NC(k)} prod_{B in pi} R_{|B|}` by enumeration.
pub fn noncrossing_moments(c: &CumulantSeq<BigRational>, order: usize) -> Vec<BigRational> {
    (1..=order)
        .map(|k| {
            set_partitions(k)
                .into_iter()
                .filter(|p| is_noncrossing(p))
                .map(|p| {
                    let blocks = p.iter().max().map_or(0, |m| m + 1);
                    (0..blocks).fold(BigRational::one(), |acc, b| {
                        acc * c.get(p.iter().filter(|&&x| x == b).count())
                    })
                })
                .sum()
        })
        .collect()
}

pub fn freeprob_suite(config: &VerifyConfig) -> Vec<VerifyReport> {
    let order = config.noncrossing_order;
    let mut brute = VerifyReport::new(format!(
        "moment-cumulant formula equals non-crossing sum [order {order}]"
    ));
    let mut roundtrip = VerifyReport::new(format!("moments to cumulants and back [order {order}]"));
    let samples: Vec<CumulantSeq<BigRational>> = vec![
        CumulantSeq::new(
            (1..=order as i64)
                .map(|k| BigRational::new(k.into(), (k + 1).into()))
                .collect(),
        ),
        CumulantSeq::new(
            (1..=order as i64)
                .map(|k| BigRational::new(((-2i64).pow(k as u32) + 1).into(), 3.into()))
                .collect(),
        ),
        CumulantSeq::semicircle(BigRational::one(), order),
    ];
    for c in &samples {
        let fast = cumulants_to_moments(c);
        let slow = noncrossing_moments(c, order);
        brute.check(fast == slow, || {
            format!(
                "R = {:?}",
                c.values().iter().map(fmt_rational).collect::<Vec<_>>()
            )
        });
        let back = moments_to_cumulants(&fast);
        roundtrip.check(back.values() == c.values(), || {
            "cumulant roundtrip differs".to_string()
        });
    }
    for nu in YoungDiagram::partitions(6) {
        let m = nu.transition_measure::<BigRational>().moments(order);
        let c = moments_to_cumulants(&m[1..]);
        roundtrip.check(cumulants_to_moments(&c) == m[1..], || {
            format!("transition measure of {nu}")
        });
    }
    vec![brute, roundtrip]
}

pub fn thoma_suite(config: &VerifyConfig) -> Result<Vec<VerifyReport>> {
    let mut power_sums = VerifyReport::new("Thoma measure moments equal power sums");
    let z2 = FiniteGroupTable::cyclic(2)?;
    let params = PresetParams {
        r: 1.5,
        r_prime: 2.0,
        a: vec![0.25, 0.125],
        b: vec![0.125, 0.0625],
        c: vec![0.5, 0.5],
    };
    for kind in [PresetKind::P2, PresetKind::P3] {
        let fam = ThomaFamily::new(kind, Some(params.clone()), z2.clone())?;
        for &n in &config.thoma_sizes {
            let omega = fam.param::<BigRational>(n)?;
            for (z, tau) in thoma_measure(&omega).iter().enumerate() {
                power_sums.check(tau.total_mass() == omega.components[z].c, || {
                    format!("{kind:?} n = {n}: mass")
                });
                for k in 1..8u32 {
                    power_sums.check(tau.moment(k - 1) == omega.power_sum(z, k), || {
                        format!("{kind:?} n = {n} irrep {z}: M_{} != p_{k}", k - 1)
                    });
                }
            }
        }
    }

    let mut delta =
        VerifyReport::new("Plancherel family character is the delta at the identity [k <= 4]");
    for table in [
        FiniteGroupTable::trivial(),
        z2.clone(),
        FiniteGroupTable::s3(),
    ] {
        let fam = ThomaFamily::new(PresetKind::P1, None, table.clone())?;
        let omega = fam.param::<BigRational>(100)?;
        for k in 1..=4 {
            for rho in ClassType::enumerate(k, table.num_classes()) {
                let v = character_value(&omega, &rho, &table)?;
                let identity = rho.fixed_points() == k;
                let expected = if identity {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                delta.check(v.im.is_zero() && v.re == expected, || {
                    format!(
                        "{} at {}: {}",
                        table.name(),
                        rho.display_with(&table),
                        fmt_exact_complex(&v)
                    )
                });
            }
        }
    }

    let mut poisson = VerifyReport::new("free-Poisson family gives N^(1-k) on k-cycles");
    let trivial = FiniteGroupTable::trivial();
    let fam = ThomaFamily::new(
        PresetKind::P2,
        Some(PresetParams::single(1.0, 1.0, 1.0, 0.0, 1.0)),
        trivial.clone(),
    )?;
    for &n in &config.thoma_sizes {
        let big_n = BigInt::from(ThomaFamily::atom_count(1.0, n));
        let omega = fam.param::<BigRational>(n)?;
        for k in 1..=6usize {
            let v = character_value(&omega, &ClassType::cycle(k, 0, 1), &trivial)?;
            let expected = BigRational::new(BigInt::one(), big_n.pow(k as u32 - 1));
            poisson.check(v.re == expected, || {
                format!("n = {n}, k = {k}: {}", fmt_exact_complex(&v))
            });
        }
    }
    Ok(vec![power_sums, delta, poisson])
}
