use elastica_core::grid::EndpointGrid;
use elastica_core::planner::{plan, Node, PlanContext, PlanResult, PlannerOptions};
use elastica_core::{Error, Triplet};

use crate::error::Result;
use crate::parallel::PoolEvaluator;
use crate::scene::{resolve_state, Scene, StateSpec};

pub fn context<'a>(scene: &Scene, grid: &'a EndpointGrid, options: PlannerOptions) -> Result<PlanContext<'a>> {
    Ok(PlanContext::new(grid, scene.cable, scene.workspace, scene.obstacles.clone(), options)?)
}

/// Grid node, branch and requested shape of a scene state.
pub fn locate(ctx: &PlanContext<'_>, s: &StateSpec, infeasible: Error) -> Result<(Node, u8, Triplet)> {
    let (t, xy) = resolve_state(s, ctx.grid, &ctx.cable).map_err(|_| infeasible)?;
    let node = ctx.snap(&s.base, xy).map_err(|_| infeasible)?;
    if !ctx.grid.cell(node.ex as usize, node.ey as usize).is_feasible() {
        return Err(infeasible.into());
    }
    Ok((node, ctx.closest_branch(node, &t), t))
}

pub fn plan_with(scene: &Scene, grid: &EndpointGrid, options: PlannerOptions, workers: usize) -> Result<PlanResult> {
    let ctx = context(scene, grid, options)?;
    let (s, sb, _) = locate(&ctx, &scene.start, Error::InfeasibleStart)?;
    let (t, _, _) = locate(&ctx, &scene.target, Error::InfeasibleTarget)?;
    let eval = PoolEvaluator::new(workers)?;
    Ok(plan(&ctx, &eval, s, sb, t)?)
}

pub fn plan_scene(scene: &Scene, grid: &EndpointGrid, workers: usize) -> Result<PlanResult> {
    plan_with(scene, grid, scene.options, workers)
}
