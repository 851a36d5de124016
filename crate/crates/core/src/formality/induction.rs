//! Purity implies formality: stage `k` kills `μ^{k+1}` with `Φ = Id + b^k/(1-k)`.

use std::sync::Arc;

use log::{debug, info};

use crate::ainfty::check::report;
use crate::ainfty::{check_ainfty, compose_fd, transport, AInftyStructure, FormalDiffeomorphism};
use crate::error::{Error, Result};
use crate::exactlin::GradedSpace;
use crate::hochschild::search::cocycle_residual;
use crate::hochschild::{
    certify_field, euler_field, euler_map, find_nc_field, require_pure, Cochain, FieldConstraints, NcVectorField,
    SearchMode, SearchReport,
};

/// `CharacteristicObstruction` when `1 - k` vanishes in the base field.
pub fn check_characteristic(space: &GradedSpace, k: usize) -> Result<()> {
    let p = space.field().characteristic();
    if p != 0 && (k as u64 - 1).is_multiple_of(p) {
        return Err(Error::CharacteristicObstruction { stage: k, characteristic: p });
    }
    Ok(())
}

/// Pure field `e + b^k` for stage `k`: `b^2 = ... = b^{k-1} = 0`, a cocycle through arity `k + 1`.
pub fn solve_stage_field(a: &AInftyStructure, k: usize, mode: SearchMode) -> Result<(NcVectorField, SearchReport)> {
    let c = FieldConstraints::new(euler_map(a.space()), 2..k, k + 1).with_mode(mode);
    find_nc_field(a, &c)
}

/// Outcome of one stage.
#[derive(Clone, Debug)]
pub struct StepResult {
    /// `Φ¹ = Id`, `Φ^k = b^k/(1-k)`.
    pub phi: FormalDiffeomorphism,
    pub next: AInftyStructure,
    /// Pure field on `next`, linear to order `k`, when the truncation leaves room for stage `k + 1`.
    pub b_next: Option<(NcVectorField, SearchReport)>,
    pub skipped: bool,
}

fn first_higher(a: &AInftyStructure, upto: usize, relation: &str) -> Result<()> {
    for (d, m) in a.mu().components() {
        if (3..=upto).contains(&d) {
            if let Some((key, v)) = m.sorted_entries().first() {
                return Err(Error::Violation(report(a.space(), relation, key, v)));
            }
        }
    }
    Ok(())
}

/// One induction stage. Requires `a` minimal and formal to order `k`, and `b`
/// pure, linear to order `k - 1` and a cocycle through arity `k + 1`.
pub fn formality_step(a: &AInftyStructure, b: &Cochain, k: usize, mode: SearchMode) -> Result<StepResult> {
    if k < 2 {
        return Err(Error::Validation("formality stages start at k = 2".into()));
    }
    check_characteristic(a.space(), k)?;
    require_pure(a, b)?;
    first_higher(a, k, &format!("formal to order {k}"))?;
    if let Some(s) = b.components().map(|(s, _)| s).find(|s| (2..k).contains(s)) {
        return Err(Error::Validation(format!("field is not linear to order {}: b^{s} ≠ 0", k - 1)));
    }
    let used = b.truncated(k);
    if let Some((key, v)) = cocycle_residual(a, &used, k + 1) {
        return Err(Error::Violation(report(a.space(), "cocycle equation δb = 0", &key, &v)));
    }
    let space = a.space_arc().clone();
    let n = a.max_arity();
    let bk = used.restricted(|s| s == k);
    let skipped = bk.is_zero();
    let (phi, next) = if skipped {
        (FormalDiffeomorphism::identity(space.clone(), n), a.clone())
    } else {
        let field = space.field();
        let factor = field.from_i64(1 - k as i64).inv()?;
        let phi = FormalDiffeomorphism::from_higher(space.clone(), bk.scaled(&factor), n)?;
        let next = transport(a, &phi)?;
        (phi, next)
    };
    first_higher(&next, k + 1, &format!("stage {k} leaves μ^d = 0 for 3 ≤ d ≤ {}", k + 1))?;
    let b_next = if k + 2 <= n { Some(solve_stage_field(&next, k + 1, mode)?) } else { None };
    Ok(StepResult { phi, next, b_next, skipped })
}

/// Transcript entry of one stage.
#[derive(Clone, Debug)]
pub struct StageRecord {
    pub stage: usize,
    pub skipped: bool,
    /// The component `Φ^k` (empty when skipped).
    pub phi: Cochain,
    /// Search that produced `b^k`, when it was solved for.
    pub search: Option<SearchReport>,
    /// Highest order to which the structure is formal after this stage.
    pub formal_to: usize,
}

#[derive(Clone, Debug)]
pub struct FormalizeResult {
    /// `Φ_{N-1} ∘ ... ∘ Φ_2`, an A∞-functor from the input to `formal`.
    pub phi_total: FormalDiffeomorphism,
    pub formal: AInftyStructure,
    pub stages: Vec<StageRecord>,
    /// The Euler field is a certified cocycle of `formal` through the truncation.
    pub euler_certified: bool,
}

/// Runs the stages `k = 2, ..., N - 1` with `N = a.max_arity()`. With `field`
/// given, its `b²` drives stage 2; every later `b^k`, and `b²` otherwise, is
/// re-solved on the current structure.
pub fn formalize(a: &AInftyStructure, field: Option<&Cochain>, mode: SearchMode) -> Result<FormalizeResult> {
    a.require_minimal()?;
    let n = a.max_arity();
    let space: Arc<GradedSpace> = a.space_arc().clone();
    let mut current = a.clone();
    let mut phi_total = FormalDiffeomorphism::identity(space.clone(), n);
    let mut stages = Vec::new();
    if n >= 3 {
        check_characteristic(&space, 2)?;
    }
    let mut next_field: Option<(Cochain, Option<SearchReport>)> = match field {
        Some(b) => {
            require_pure(a, b)?;
            Some((b.clone(), None))
        }
        None if n >= 3 => {
            let (f, r) = solve_stage_field(a, 2, mode)?;
            Some((f.field, Some(r)))
        }
        None => None,
    };
    for k in 2..n {
        let (b, search) = next_field.take().expect("field for every stage");
        info!("formality stage {k}");
        let step = formality_step(&current, &b, k, mode)?;
        debug!("stage {k}: skipped = {}", step.skipped);
        if !step.skipped {
            phi_total = compose_fd(&step.phi, &phi_total)?;
        }
        stages.push(StageRecord {
            stage: k,
            skipped: step.skipped,
            phi: step.phi.phi().restricted(|s| s == k),
            search,
            formal_to: k + 1,
        });
        current = step.next;
        next_field = step.b_next.map(|(f, r)| (f.field, Some(r)));
    }
    check_ainfty(&current).map_err(Error::Violation)?;
    first_higher(&current, n, "formal structure has no higher products")?;
    let euler_certified = certify_field(&current, euler_field(&space), n).is_ok();
    Ok(FormalizeResult { phi_total, formal: current, stages, euler_certified })
}
