//! Numerical dynamics: integration, Poincaré sections, cycle search and
//! lifting of a base cycle through a branched cover.

mod cycle;
mod integrate;
mod lift;
mod section;

pub use cycle::{find_cycle, BranchRectangle, CycleConfig, LimitCycleRecord};
pub use integrate::{
    integrate, CompiledField, DenseStep, IntegratorConfig, PlanarField, Stepper, Trajectory,
};
pub use lift::{
    base_cycle_on_axis, curve_residual_along, cycles_to_csv, cycles_to_json, implicit_lift_curve,
    lift_cycles, worked_example, ExampleReport, LiftConfig, CYCLE_CSV_HEADER,
};
pub use section::{poincare_return, ReturnConfig, ReturnHit, Section};
