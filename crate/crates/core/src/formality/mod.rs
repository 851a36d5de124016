//! From pure nc-vector fields to formality, and weight gradings.

pub mod categorical;
pub mod induction;
pub mod weights;

pub use categorical::{categorical_formalize, CategoricalFormalization};
pub use induction::{
    check_characteristic, formality_step, formalize, solve_stage_field, FormalizeResult, StageRecord, StepResult,
};
pub use weights::{
    select_equivariant_structures, twisted_field, weight_endomorphism, weight_table, EquivariantStructures,
    ShiftSelection, WeightSpace, WeightTable,
};
