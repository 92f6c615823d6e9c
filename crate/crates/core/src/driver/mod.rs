//! Recursive classification of `Irr(G_r)` and its certification.
//!
//! Level `r = 1` comes from the oracle. For `r >= 2` the candidates are the
//! characters of `G_{r-1}` inflated along reduction and twisted by every
//! `λ∘det`, plus the output of the registered construction for every reduced
//! orbit, with `(3')` outputs twisted as well. Candidates are deduplicated by
//! their value vectors and the result must pass [`Certificate`].

mod matching;
mod record;

use std::collections::BTreeMap;

use num_complex::Complex64;

pub use matching::{bottleneck_matching, row_distance};
pub use record::IrrepRecord;

use crate::charfun::{inner_on_elements, ClassFunction, Level};
use crate::clifford::Registry;
use crate::matgroup::{ConjClasses, Mat2};
use crate::oracle::{compare_rows, oracle_table, orbit_partition, orthogonality_residuals, DEFAULT_SEED, MAX_CLASSES};
use crate::orbits::{orbit_reps, OrbitType};
use crate::ring::{AbelianCharTable, Ring, RingElem, RingSpec};
use crate::{Error, DEFAULT_CAP, TOLERANCE};

/// Knobs for [`classify_with`].
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Largest group order that may be enumerated, at any level.
    pub cap: usize,
    /// Seed of the oracle used for `r = 1`.
    pub oracle_seed: u64,
    /// The additive character used is `x ↦ ψ(u x)` for this integer `u`, a unit mod `p`.
    pub psi_unit: i64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cap: DEFAULT_CAP,
            oracle_seed: DEFAULT_SEED,
            psi_unit: 1,
        }
    }
}

/// The irreducible characters of `G_r`, one record per class-function row.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    level: Level,
    irreps: Vec<IrrepRecord>,
    merges: usize,
}

impl CharacterTable {
    pub fn spec(&self) -> RingSpec {
        self.level.spec()
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn classes(&self) -> &ConjClasses {
        self.level.classes()
    }

    pub fn irreps(&self) -> &[IrrepRecord] {
        &self.irreps
    }

    pub fn irreps_mut(&mut self) -> &mut [IrrepRecord] {
        &mut self.irreps
    }

    /// Number of candidate characters discarded as duplicates.
    pub fn merges(&self) -> usize {
        self.merges
    }

    pub fn group_order(&self) -> u64 {
        self.level.order() as u64
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.irreps.iter().map(|r| r.chi.values().to_vec()).collect()
    }

    /// `Σ dim²` grouped by the mod-`ϖ` type of the orbit each character lies over.
    pub fn mass_by_type(&self) -> BTreeMap<OrbitType, u64> {
        let mut m = BTreeMap::new();
        for rec in &self.irreps {
            *m.entry(rec.orbit_type).or_insert(0) += rec.dim * rec.dim;
        }
        m
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::for_rows(&self.rows(), self.classes())
    }
}

/// Completeness evidence for a table.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub dim_square_sum: u64,
    pub group_order: u64,
    pub irreps: usize,
    pub classes: usize,
    pub row_residual: f64,
    pub col_residual: f64,
}

impl Certificate {
    /// Evidence for an arbitrary list of rows; degrees are the rounded values at class 0.
    pub fn for_rows(rows: &[Vec<Complex64>], classes: &ConjClasses) -> Certificate {
        let (row_residual, col_residual) = orthogonality_residuals(rows, classes);
        Certificate {
            dim_square_sum: rows.iter().map(|r| (r[0].re.round().max(0.0) as u64).pow(2)).sum(),
            group_order: classes.group_order() as u64,
            irreps: rows.len(),
            classes: classes.len(),
            row_residual,
            col_residual,
        }
    }

    pub fn passed(&self) -> bool {
        self.dim_square_sum == self.group_order
            && self.irreps == self.classes
            && self.row_residual < TOLERANCE
            && self.col_residual < TOLERANCE
    }

    fn into_result(self) -> Result<(), Error> {
        if self.passed() {
            return Ok(());
        }
        Err(Error::Certificate(format!(
            "Σ dim² = {} vs |G| = {} (deficit {}), {} irreps vs {} classes, residuals {:e}/{:e}",
            self.dim_square_sum,
            self.group_order,
            self.group_order as i64 - self.dim_square_sum as i64,
            self.irreps,
            self.classes,
            self.row_residual,
            self.col_residual
        )))
    }
}

/// Certified character table of `GL_2(O_r)` with default options.
pub fn classify(spec: RingSpec, cap: usize) -> Result<CharacterTable, Error> {
    classify_with(
        spec,
        &ClassifyOptions {
            cap,
            ..ClassifyOptions::default()
        },
        &Registry::standard(),
    )
}

/// Certified character table; fails with [`Error::Certificate`] if incomplete.
pub fn classify_with(spec: RingSpec, opts: &ClassifyOptions, registry: &Registry) -> Result<CharacterTable, Error> {
    let table = build_table(spec, opts, registry)?;
    table.certificate().into_result()?;
    Ok(table)
}

/// The table for `spec` without enforcing the final certificate (lower levels
/// are always certified).
pub fn build_table(spec: RingSpec, opts: &ClassifyOptions, registry: &Registry) -> Result<CharacterTable, Error> {
    let level = Level::new(spec, opts.cap)?;
    let unit = level.group().ring().from_int(opts.psi_unit);
    let level = level.with_psi_unit(unit)?;
    if spec.r == 1 {
        let rows = oracle_table(level.group(), level.classes(), opts.oracle_seed)?;
        let irreps = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                IrrepRecord::new(format!("r=1 oracle#{i}"), 1, OrbitType::Scalar, level.class_function(row))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(CharacterTable {
            level,
            irreps,
            merges: 0,
        });
    }

    let lower = classify_with(spec.at_level(spec.r - 1), opts, registry)?;
    let r = spec.r;
    let lambdas = unit_characters(level.group().ring());
    let twist = |f: &ClassFunction, c: usize| level.mult_by_linear(f, |d| lambdas.value(c, d));

    let mut candidates = Vec::new();
    for (rec, chi) in lower.irreps.iter().zip(inflate(&lower, &level)) {
        let base = IrrepRecord::new(format!("r={r} inflate({})", rec.label), r, OrbitType::Scalar, chi)?;
        for c in 0..lambdas.len() {
            candidates.push(base.twisted(twist(&base.chi, c), c));
        }
    }

    let ring_lp = Ring::new(spec.at_level(level.constants().l_prime))?;
    for orbit in orbit_reps(&ring_lp) {
        let construction = registry.select(r, orbit.kind).ok_or_else(|| {
            Error::WrongConstruction(format!("no construction registered for {} at r = {r}", orbit.kind))
        })?;
        for rec in construction.construct(&level, &orbit)? {
            if orbit.kind == OrbitType::ScalarPlusNilpotent {
                for c in 0..lambdas.len() {
                    candidates.push(rec.twisted(twist(&rec.chi, c), c));
                }
            } else {
                candidates.push(rec);
            }
        }
    }

    let total = candidates.len();
    let mut irreps: Vec<IrrepRecord> = Vec::new();
    for cand in candidates {
        if !irreps.iter().any(|kept| kept.chi.max_distance(&cand.chi) < TOLERANCE) {
            irreps.push(cand);
        }
    }
    let merges = total - irreps.len();
    log::info!("{spec:?}: {total} candidates, {merges} merged, {} kept", irreps.len());
    irreps.sort_by(|a, b| compare_rows(a.chi.values(), b.chi.values()));
    Ok(CharacterTable { level, irreps, merges })
}

/// Characters of `O^×` for the ring, as a lookup table.
pub fn unit_characters(ring: &Ring) -> AbelianCharTable<RingElem> {
    let units: Vec<RingElem> = ring.units().collect();
    AbelianCharTable::new(&units, |a, b| ring.mul(a, b)).expect("unit group is abelian")
}

/// The characters of `lower` pulled back to `level` along entrywise reduction.
pub fn inflate(lower: &CharacterTable, level: &Level) -> Vec<ClassFunction> {
    let lower_group = lower.level.group();
    let s = lower_group.level();
    let ring = level.group().ring();
    let lower_class: Vec<usize> = level
        .classes()
        .reps()
        .iter()
        .map(|&g| {
            let m = level.group().mat(g).reduce(ring, s);
            lower.classes().class_of(lower_group.index_of(&m).expect("reduction is invertible"))
        })
        .collect();
    lower
        .irreps
        .iter()
        .map(|rec| level.class_function(lower_class.iter().map(|&k| rec.chi.values()[k]).collect()))
        .collect()
}

/// Outcome of [`verify`]; `passed` summarizes every individual check.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub certificate: Certificate,
    /// Labels of characters whose restriction to `K_l` is not supported on a
    /// single orbit with constant multiplicity; `None` when `r = 1`.
    pub orbit_failures: Option<Vec<String>>,
    /// Largest residual of the best bijection with the oracle table; `None`
    /// when the group has too many classes, infinite when no bijection exists.
    pub oracle_residual: Option<f64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.certificate.passed()
            && self.orbit_failures.as_ref().is_none_or(|f| f.is_empty())
            && self.oracle_residual.is_none_or(|r| r < TOLERANCE)
    }
}

/// Certificate, per-orbit restriction check and (when feasible) oracle matching.
pub fn verify(table: &CharacterTable, oracle_seed: u64) -> Result<VerifyReport, Error> {
    let level = &table.level;
    let orbit_failures = if level.r() >= 2 { Some(orbit_failures(table)?) } else { None };
    let oracle_residual = if level.classes().len() <= MAX_CLASSES {
        let oracle_rows = oracle_table(level.group(), level.classes(), oracle_seed)?;
        Some(bottleneck_matching(&table.rows(), &oracle_rows).map_or(f64::INFINITY, |m| m.1))
    } else {
        None
    };
    Ok(VerifyReport {
        certificate: table.certificate(),
        orbit_failures,
        oracle_residual,
    })
}

/// For every character, the `β ∈ M_2(O_{l'})` with `⟨Res_{K_l} χ, ψ_β⟩ > 0`
/// must form one conjugation orbit, all with the same multiplicity.
fn orbit_failures(table: &CharacterTable) -> Result<Vec<String>, Error> {
    let level = &table.level;
    let consts = level.constants();
    let group = level.group();
    let ring = group.ring();
    let ring_lp = Ring::new(level.spec().at_level(consts.l_prime))?;
    let n = ring_lp.size();
    let betas: Vec<Mat2> = (0..(n as u64).pow(4)).map(|c| Mat2::decode(c, n)).collect();
    let gens: Vec<(Mat2, Mat2)> = group
        .generators()
        .iter()
        .map(|&g| {
            let m = group.mat(g).reduce(ring, consts.l_prime);
            (m, ring_lp.mat_inv(&m).expect("generator is invertible"))
        })
        .collect();
    let actions: Vec<Box<dyn Fn(usize) -> usize>> = gens
        .iter()
        .map(|(g, g_inv)| {
            let ring_lp = &ring_lp;
            let betas = &betas;
            Box::new(move |i: usize| {
                ring_lp.mat_mul(&ring_lp.mat_mul(g, &betas[i]), g_inv).code(n) as usize
            }) as Box<dyn Fn(usize) -> usize>
        })
        .collect();
    let action_refs: Vec<&dyn Fn(usize) -> usize> = actions.iter().map(|a| a.as_ref()).collect();
    let orbits = orbit_partition(betas.len(), &action_refs);
    let mut orbit_of = vec![0; betas.len()];
    for (k, o) in orbits.iter().enumerate() {
        for &i in o {
            orbit_of[i] = k;
        }
    }
    let psis = betas
        .iter()
        .map(|b| level.psi_beta(b, consts.l).map(|p| p.complex_values()))
        .collect::<Result<Vec<_>, _>>()?;
    let k_l = group.congruence_subgroup(consts.l)?;

    let mut failures = Vec::new();
    for rec in &table.irreps {
        let res = level.restrict(&rec.chi, &k_l);
        let mut support = Vec::new();
        for (i, psi) in psis.iter().enumerate() {
            let m = inner_on_elements(&res, psi);
            if m.re > 0.5 {
                support.push((i, m.re.round() as i64));
            }
        }
        let ok = support.first().is_some_and(|&(i0, m0)| {
            let orbit = &orbits[orbit_of[i0]];
            support.len() == orbit.len() && support.iter().all(|&(i, m)| orbit_of[i] == orbit_of[i0] && m == m0)
        });
        if !ok {
            failures.push(rec.label.clone());
        }
    }
    Ok(failures)
}
