use ordo_core::certify::{
    verify_infeasible, verify_minmax_lower_bound, verify_order, verify_partition, verify_partition_infeasible, Verdict,
};
use ordo_core::oracle::{FamilyExtra, OrderPredicate};
use ordo_core::{ArcFamilyKind, ArcPartition, BoundSpec, Digraph, Witness};
use serde_json::json;

use crate::args::VerifyArgs;
use crate::commands::{family_predicate, predicate};
use crate::io;
use crate::report::{usage, Claim, CliError, Outcome, Report, SCHEMA};

pub fn run(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let raw = io::graph(&args.graph)?;
    let bounds = io::bounds(args.bounds.as_ref())?;
    let d = bounds.apply_weight_defaults(&raw).map_err(io::at(args.bounds.as_ref()))?;
    let (subject, verdicts) = match &args.report {
        Some(path) => ("report", check_report(&d, &io::json(path)?)?),
        None => ("claim", check_claim(&d, args)?),
    };
    let valid = verdicts.iter().all(|v| v.valid);
    let failures: Vec<&String> = verdicts.iter().flat_map(|v| &v.failures).collect();
    let methods: Vec<_> = verdicts.iter().map(|v| v.method).collect();
    Ok(Outcome::json(
        json!({
            "schema": SCHEMA,
            "command": "verify",
            "subject": subject,
            "valid": valid,
            "methods": methods,
            "failures": failures,
        }),
        valid,
    ))
}

fn check_report(d: &Digraph, report: &Report) -> Result<Vec<Verdict>, CliError> {
    let claim = report.claim.as_ref().ok_or_else(|| usage("report carries no checkable claim"))?;
    let mut verdicts = Vec::new();
    match claim {
        Claim::Order { predicate } if report.feasible => {
            let order = report.order.as_ref().ok_or_else(|| usage("feasible report has no order"))?;
            verdicts.push(verify_order(d, order, predicate)?);
            if let Some(p) = &report.partition {
                verdicts.push(verify_partition(d, p)?);
            }
        }
        Claim::Order { predicate } => verdicts.push(verify_infeasible(d, predicate, report.witness.as_ref())?),
        Claim::Partition { kind } => verdicts.push(check_partition(d, *kind, report)?),
        Claim::Minmax { value, lower_bound_set } => {
            let order = report.order.as_ref().ok_or_else(|| usage("minmax report has no order"))?;
            let cap = OrderPredicate::Bounds { spec: BoundSpec::upper(vec![*value; d.n()]), weights: None };
            verdicts.push(verify_order(d, order, &cap)?);
            verdicts.push(verify_minmax_lower_bound(d, lower_bound_set, *value)?);
        }
    }
    Ok(verdicts)
}

fn check_partition(d: &Digraph, kind: ArcFamilyKind, report: &Report) -> Result<Verdict, CliError> {
    if report.feasible {
        let p = report.partition.as_ref().ok_or_else(|| usage("feasible report has no partition"))?;
        if p.kind != kind {
            return Err(usage(format!("partition kind {} differs from claimed {kind}", p.kind)));
        }
        return Ok(verify_partition(d, p)?);
    }
    // An in-branching partition exists exactly when an in-branching order does.
    Ok(match (&report.witness, kind) {
        (Some(w), ArcFamilyKind::InBranching) => {
            verify_infeasible(d, &OrderPredicate::family(ArcFamilyKind::InBranching), Some(w))?
        }
        _ => verify_partition_infeasible(d, kind)?,
    })
}

fn check_claim(d: &Digraph, args: &VerifyArgs) -> Result<Vec<Verdict>, CliError> {
    if let Some(path) = &args.partition {
        let p: ArcPartition = io::json(path)?;
        return Ok(vec![verify_partition(d, &p)?]);
    }
    let pred = claim_predicate(d, args)?;
    let verdict = match (&args.order, &args.witness) {
        (Some(order), None) => verify_order(d, order, &pred)?,
        (None, Some(path)) => {
            let w: Witness = io::json(path)?;
            verify_infeasible(d, &pred, Some(&w))?
        }
        (None, None) => verify_infeasible(d, &pred, None)?,
        (Some(_), Some(_)) => return Err(usage("give either --order or --witness")),
    };
    Ok(vec![verdict])
}

fn claim_predicate(d: &Digraph, args: &VerifyArgs) -> Result<OrderPredicate, CliError> {
    match (args.problem, args.kind, args.family) {
        (Some(problem), None, None) => {
            let b = io::bounds(args.bounds.as_ref())?;
            predicate(problem, d, &b, args.window_k, args.bounds.as_ref())
        }
        (None, Some(kind), None) => {
            let extra = if args.flags.roots.is_empty() {
                FamilyExtra::None
            } else if kind == ArcFamilyKind::InBranching {
                FamilyExtra::Roots(args.flags.roots.clone())
            } else {
                return Err(usage("--roots applies to in-branching only"));
            };
            Ok(OrderPredicate::Family { kind, extra })
        }
        (None, None, Some(family)) => family_predicate(family, &args.flags),
        _ => Err(usage("give exactly one of --problem, --kind, --family")),
    }
}
