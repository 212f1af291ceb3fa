use std::collections::HashSet;

use crate::circuit::{CircuitAnalysis, EdgeCircuitData};
use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::invariants::{a_pq, factorial, k_of, tau, tau_at, tau_oracle_contraction, w_nested, EdgeSums, InvariantSet};
use crate::invariants::CONTRACTION_ORACLE_MAX_VERTICES;
use crate::transforms::{admissible_contractions, double_adjusted, identify_endpoints};

use super::context::{Context, Level, Side};
use super::{IdentityId, Instance, NESTED_MAX_VERTICES};

type Instances = Result<Vec<Instance>>;

pub(crate) fn evaluate(ctx: &Context, id: IdentityId) -> Instances {
    use IdentityId::*;
    let out = match id {
        Genus => genus(ctx),
        TauContract => tau_contract(ctx),
        TauGenus => tau_genus(ctx),
        TauGenusLb => tau_genus_lb(ctx),
        ContDelTau => cont_del_tau(ctx),
        DaTau => da_tau(ctx),
        DelIdDa => del_id_da(ctx),
        DelIdA => del_id_a(ctx),
        KNonneg => k_checks(ctx, false),
        KContract => k_checks(ctx, true),
        CdX => cd(ctx, |d| d.r_term(), |i| i.x),
        CdY => cd(ctx, |_| 0.0, |i| i.y),
        CdZ => cd(ctx, |d| d.z_term(), |i| i.z),
        CdR => cd(ctx, |d| d.r_term(), |i| i.r),
        ApqContract => apq_contract(ctx),
        EulerZ => euler_z(ctx),
        EulerXy => euler_xy(ctx),
        ContrX => contr(ctx, 3, 2, |i| i.x),
        ContrY => contr(ctx, 3, 2, |i| i.y),
        ContrZ => contr(ctx, 2, 1, |i| i.z),
        ContrR => contr(ctx, 3, 2, |i| i.r),
        DelX => del_x(ctx),
        DelY => del_simple(ctx, 1.0, |i| i.y),
        DelZ => del_simple(ctx, -1.0, |i| i.z),
        DelR => del_simple(ctx, 0.0, |i| i.r),
        TauContr2 => tau_contr2(ctx),
        TauDel2 => tau_del2(ctx),
        SuccXy => succ_xy(ctx),
        SuccTau => succ_tau(ctx),
        SuccR => succ_r(ctx),
        SuccRBounds => succ_r_bounds(ctx),
        SuccZ => succ_z(ctx),
        BananaXy => banana_xy(ctx),
        TauMain5 => tau_main5(ctx),
        WId => w_id(ctx),
        ZXBound => z_x_bound(ctx),
        Ahm => ahm(ctx),
        Norm2term => norm2term(ctx),
        ValPartition => val_partition(ctx),
        Edgecon11 => edgecon11(ctx),
    }?;
    if out.is_empty() {
        return Err(Error::NotApplicable("no edge meets the hypotheses".into()));
    }
    Ok(out)
}

fn bridgeless(ctx: &Context) -> Result<()> {
    if ctx.bridgeless {
        Ok(())
    } else {
        Err(Error::NotApplicable("requires bridgeless".into()))
    }
}

fn min_vertices(ctx: &Context, v: usize) -> Result<()> {
    if ctx.v() >= v {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("requires v >= {v}")))
    }
}

fn nested_cap(ctx: &Context) -> Result<()> {
    if ctx.v() <= NESTED_MAX_VERTICES {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("nested sums are capped at v <= {NESTED_MAX_VERTICES}")))
    }
}

/// `(L, R)` for a non-bridge edge.
fn lr(d: &EdgeCircuitData) -> (f64, f64) {
    (d.length, d.resistance.finite().expect("caller filters bridges"))
}

/// Non-bridge edges with their deletion.
fn with_deletion(ctx: &Context) -> impl Iterator<Item = (&EdgeCircuitData, &Side, &Side)> {
    ctx.data
        .iter()
        .zip(&ctx.deleted)
        .zip(&ctx.contracted)
        .filter_map(|((d, del), con)| del.as_ref().map(|del| (d, del, con)))
}

fn genus(ctx: &Context) -> Instances {
    let wd: f64 = ctx.data.iter().map(|d| d.deletion_weight()).sum();
    let wc: f64 = ctx.data.iter().map(|d| d.contraction_weight()).sum();
    Ok(vec![
        Instance::eq(wd, ctx.g.genus() as f64, "sum of L/(L+R) against g"),
        Instance::eq(wc, ctx.v() as f64 - 1.0, "sum of R/(L+R) against v-1"),
    ])
}

fn tau_contract(ctx: &Context) -> Instances {
    min_vertices(ctx, 3)?;
    let d = ctx.v() as f64 - 2.0;
    let (mut contracted, mut identified) = (0.0, 0.0);
    for (k, (data, side)) in ctx.data.iter().zip(&ctx.contracted).enumerate() {
        let w = data.contraction_weight();
        if w == 0.0 {
            continue;
        }
        contracted += w * side.inv.tau;
        identified += w * tau(&identify_endpoints(&ctx.g, EdgeId(k))?.graph)?;
    }
    Ok(vec![
        Instance::eq(ctx.inv.tau, contracted / d - ctx.inv.z / (12.0 * d), "contracted form"),
        Instance::eq(ctx.inv.tau, identified / d - ctx.inv.ell / (12.0 * d), "identified-endpoints form"),
    ])
}

fn tau_genus(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let g1 = ctx.g.genus() as f64 + 1.0;
    let sum: f64 = with_deletion(ctx).map(|(d, del, _)| d.deletion_weight() * del.inv.tau).sum();
    let rhs = sum / g1 + ctx.inv.ell / (6.0 * g1) - ctx.inv.r / (4.0 * g1);
    Ok(vec![Instance::eq(ctx.inv.tau, rhs, "whole graph")])
}

fn tau_genus_lb(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let g1 = ctx.g.genus() as f64 + 1.0;
    Ok(vec![Instance::ge(ctx.inv.tau, ctx.inv.ell / (6.0 * g1), "whole graph")])
}

fn cont_del_tau(ctx: &Context) -> Instances {
    Ok(with_deletion(ctx)
        .map(|(d, del, con)| {
            let (l, r) = lr(d);
            let rhs = l / (l + r) * del.inv.tau + r / (l + r) * con.inv.tau + (l * l - l * r) / (12.0 * (l + r));
            Instance::eq(ctx.inv.tau, rhs, format!("edge {}", d.edge.0))
        })
        .collect())
}

fn da_tau(ctx: &Context) -> Instances {
    let lhs = tau(&double_adjusted(&ctx.g).graph)?;
    let rhs = ctx.inv.ell / 48.0 + ctx.inv.tau / 4.0 + ctx.inv.z / 24.0;
    Ok(vec![Instance::eq(lhs, rhs, "whole graph")])
}

/// `A_{p_i,q_i}` on `(Γ - e_i)^DA` and on `Γ - e_i`; zero for loops.
fn a_terms(ctx: &Context, d: &EdgeCircuitData, del: &Side) -> Result<(f64, f64, f64)> {
    let e = ctx.g.edges()[d.edge.0];
    let da = double_adjusted(&del.surgery.graph);
    let tau_da = tau(&da.graph)?;
    if e.is_loop() {
        return Ok((tau_da, 0.0, 0.0));
    }
    let (p, q) = (del.surgery.vertex(e.a), del.surgery.vertex(e.b));
    let on_da = a_pq(&da.graph, da.vertex(p), da.vertex(q))?;
    let on_deleted = a_pq(&del.surgery.graph, p, q)?;
    Ok((tau_da, on_da, on_deleted))
}

fn del_id_da(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let lhs = tau(&double_adjusted(&ctx.g).graph)?;
    with_deletion(ctx)
        .map(|(d, del, _)| {
            let (l, r) = lr(d);
            let (tau_da, a_da, _) = a_terms(ctx, d, del)?;
            let rhs = tau_da + (2.0 * l * l - r * r) / (24.0 * (l + r)) + 4.0 * a_da / (l + r);
            Ok(Instance::eq(lhs, rhs, format!("edge {}", d.edge.0)))
        })
        .collect()
}

fn del_id_a(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    with_deletion(ctx)
        .map(|(d, del, _)| {
            let (l, r) = lr(d);
            let (_, a_da, a_del) = a_terms(ctx, d, del)?;
            let k = k_of(&ctx.g, d.edge)?.value;
            Ok(Instance::eq(a_del / (l + r), 16.0 * a_da / (l + r) - k / 6.0, format!("edge {}", d.edge.0)))
        })
        .collect()
}

fn k_checks(ctx: &Context, contraction: bool) -> Instances {
    bridgeless(ctx)?;
    ctx.g
        .edge_ids()
        .map(|i| {
            let k = k_of(&ctx.g, i)?;
            let note = format!("edge {}", i.0);
            Ok(if contraction { Instance::eq(k.value, k.via_contraction, note) } else { Instance::ge(k.value, 0.0, note) })
        })
        .collect()
}

/// `f = own(e) + L/(L+R) f(Γ-e) + R/(L+R) f(Γ̄)` for every non-bridge edge.
fn cd(ctx: &Context, own: fn(&EdgeCircuitData) -> f64, f: fn(&InvariantSet) -> f64) -> Instances {
    Ok(with_deletion(ctx)
        .map(|(d, del, con)| {
            let rhs = own(d) + d.deletion_weight() * f(&del.inv) + d.contraction_weight() * f(&con.inv);
            Instance::eq(f(&ctx.inv), rhs, format!("edge {}", d.edge.0))
        })
        .collect())
}

fn apq_contract(ctx: &Context) -> Instances {
    with_deletion(ctx)
        .filter(|(d, _, _)| !ctx.g.edges()[d.edge.0].is_loop())
        .map(|(d, del, con)| {
            let (l, r) = lr(d);
            let e = ctx.g.edges()[d.edge.0];
            let a = a_pq(&del.surgery.graph, del.surgery.vertex(e.a), del.surgery.vertex(e.b))?;
            let rhs = con.inv.x - con.inv.y + 6.0 * l * a / (r * (l + r));
            Ok(Instance::eq(ctx.inv.x - ctx.inv.y, rhs, format!("edge {}", d.edge.0)))
        })
        .collect()
}

fn euler_z(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let (mut via_k, mut via_surgery, mut direct) = (0.0, 0.0, 0.0);
    for (d, del, con) in with_deletion(ctx) {
        let (l, r) = lr(d);
        via_k += l * k_of(&ctx.g, d.edge)?.value / (l + r);
        via_surgery += l * r / ((l + r) * (l + r)) * (con.inv.z - del.inv.z);
        direct += d.mixed_term();
    }
    Ok(vec![
        Instance::eq(via_k, direct, "sum of L K/(L+R) against sum of L^2 R/(L+R)^2"),
        Instance::eq(via_surgery, direct, "surgery form against sum of L^2 R/(L+R)^2"),
    ])
}

fn euler_xy(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let (mut x, mut y) = (0.0, 0.0);
    for (d, del, con) in with_deletion(ctx) {
        let (l, r) = lr(d);
        let w = l * r / ((l + r) * (l + r));
        x += d.resistance_square_term() + w * (del.inv.x - con.inv.x);
        y += w * (del.inv.y - con.inv.y);
    }
    Ok(vec![Instance::eq(ctx.inv.x, x, "x"), Instance::eq(ctx.inv.y, y, "y")])
}

/// `(v - shift) f = Σ R/(L+R) f(Γ̄_i)`.
fn contr(ctx: &Context, min_v: usize, shift: usize, f: fn(&InvariantSet) -> f64) -> Instances {
    bridgeless(ctx)?;
    min_vertices(ctx, min_v)?;
    let rhs: f64 = ctx.data.iter().zip(&ctx.contracted).map(|(d, c)| d.contraction_weight() * f(&c.inv)).sum();
    Ok(vec![Instance::eq((ctx.v() - shift) as f64 * f(&ctx.inv), rhs, "whole graph")])
}

fn deletion_sum(ctx: &Context, f: fn(&InvariantSet) -> f64) -> f64 {
    with_deletion(ctx).map(|(d, del, _)| d.deletion_weight() * f(&del.inv)).sum()
}

fn del_x(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let g = ctx.g.genus() as f64;
    Ok(vec![Instance::eq(g * ctx.inv.x, ctx.inv.y + deletion_sum(ctx, |i| i.x), "whole graph")])
}

/// `(g + shift) f = Σ L/(L+R) f(Γ - e_i)`.
fn del_simple(ctx: &Context, shift: f64, f: fn(&InvariantSet) -> f64) -> Instances {
    bridgeless(ctx)?;
    let g = ctx.g.genus() as f64;
    Ok(vec![Instance::eq((g + shift) * f(&ctx.inv), deletion_sum(ctx, f), "whole graph")])
}

fn tau_contr2(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    min_vertices(ctx, 3)?;
    let d = ctx.v() as f64 - 2.0;
    let sum: f64 = ctx.data.iter().zip(&ctx.contracted).map(|(e, c)| e.contraction_weight() * (c.inv.x - c.inv.y)).sum();
    Ok(vec![Instance::eq(ctx.inv.tau, ctx.inv.ell / 12.0 - sum / (6.0 * d), "whole graph")])
}

fn tau_del2(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    let g = ctx.g.genus() as f64;
    if g < 1.0 {
        return Err(Error::NotApplicable("requires g >= 1".into()));
    }
    let xy = deletion_sum(ctx, |i| i.x - i.y);
    let r = deletion_sum(ctx, |i| i.r);
    let rhs = ctx.inv.ell / 12.0 - xy / (6.0 * (g + 1.0)) - r / (6.0 * (g + 1.0) * g);
    Ok(vec![Instance::eq(ctx.inv.tau, rhs, "whole graph")])
}

fn nested_ready(ctx: &Context, min_v: usize) -> Result<()> {
    bridgeless(ctx)?;
    min_vertices(ctx, min_v)?;
    nested_cap(ctx)
}

fn succ_xy(ctx: &Context) -> Instances {
    nested_ready(ctx, 3)?;
    let v = ctx.v();
    (1..=v - 2)
        .map(|k| {
            let lhs = factorial(v - 2) / factorial(v - k - 2) * (ctx.inv.x - ctx.inv.y);
            let rhs = ctx.nested(k, &|l: &Level, _| l.inv.x - l.inv.y)?;
            Ok(Instance::eq(lhs, rhs, format!("k = {k}")))
        })
        .collect()
}

fn succ_tau(ctx: &Context) -> Instances {
    nested_ready(ctx, 3)?;
    let v = ctx.v();
    (1..=v - 2)
        .map(|k| {
            let sum = ctx.nested(k, &|l: &Level, _| l.inv.tau)?;
            let rhs = factorial(v - k - 2) / factorial(v - 2) * sum - k as f64 * ctx.inv.z / (12.0 * (v - k - 1) as f64);
            Ok(Instance::eq(ctx.inv.tau, rhs, format!("k = {k}")))
        })
        .collect()
}

fn succ_r(ctx: &Context) -> Instances {
    nested_ready(ctx, 3)?;
    let v = ctx.v();
    let lengths: Vec<f64> = ctx.g.lengths().collect();
    let contracted_length = |_: &Level, set: u64| -> f64 {
        lengths.iter().enumerate().filter(|(k, _)| set >> k & 1 == 1).map(|(_, l)| l).sum()
    };
    (1..=v - 2)
        .map(|k| {
            let lhs = k as f64 * factorial(v - 2) / factorial(v - k - 1) * ctx.inv.r;
            Ok(Instance::eq(lhs, ctx.nested(k, &contracted_length)?, format!("k = {k}")))
        })
        .collect()
}

fn succ_r_bounds(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    min_vertices(ctx, 3)?;
    let v = ctx.v();
    let mut lengths: Vec<f64> = ctx.g.lengths().collect();
    lengths.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for k in 1..=v - 2 {
        let small: f64 = lengths[..k].iter().sum();
        let large: f64 = lengths[lengths.len() - k..].iter().sum();
        let scale = (v - 1) as f64 / k as f64;
        out.push(Instance::ge(ctx.inv.r, scale * small, format!("lower, k = {k}")));
        out.push(Instance::ge(scale * large, ctx.inv.r, format!("upper, k = {k}")));
    }
    Ok(out)
}

fn succ_z(ctx: &Context) -> Instances {
    nested_ready(ctx, 2)?;
    let v = ctx.v();
    (1..=v - 1)
        .map(|k| {
            let lhs = factorial(v - 1) / factorial(v - k - 1) * ctx.inv.z;
            Ok(Instance::eq(lhs, ctx.nested(k, &|l: &Level, _| l.inv.z)?, format!("k = {k}")))
        })
        .collect()
}

/// The distinct graphs reached by admissible contractions, each with one
/// sequence reaching it.
fn admissible_levels(ctx: &Context) -> Result<Vec<(Vec<usize>, std::sync::Arc<Level>)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for seq in admissible_contractions(&ctx.g) {
        let mask = seq.ids.iter().fold(0u64, |m, e| m | 1 << e.0);
        if seen.insert(mask) {
            out.push((seq.ids.iter().map(|e| e.0).collect(), ctx.level(mask)?));
        }
    }
    Ok(out)
}

fn banana_xy(ctx: &Context) -> Instances {
    nested_ready(ctx, 2)?;
    let mut out = Vec::new();
    for (seq, l) in admissible_levels(ctx)? {
        let r = l.pair_resistance.expect("admissible contractions end with two vertices");
        let n = l.parallel as f64;
        out.push(Instance::eq(l.inv.x, (n - 1.0) * r, format!("x after contracting {seq:?}")));
        out.push(Instance::eq(l.inv.y, r, format!("y after contracting {seq:?}")));
    }
    Ok(out)
}

fn tau_main5(ctx: &Context) -> Instances {
    nested_ready(ctx, 3)?;
    let v = ctx.v();
    let sum = ctx.nested(v - 2, &|l: &Level, _| {
        let r = l.pair_resistance.expect("depth v-2 leaves have two vertices");
        (l.parallel as f64 - 2.0) * r
    })?;
    let rhs = ctx.inv.ell / 12.0 - sum / (6.0 * factorial(v - 2));
    Ok(vec![Instance::eq(ctx.inv.tau, rhs, "whole graph")])
}

fn w_id(ctx: &Context) -> Instances {
    nested_ready(ctx, 2)?;
    let lhs = (ctx.v() as f64 - 1.0) * ctx.inv.z;
    Ok(vec![Instance::eq(lhs, w_nested(&ctx.g)? + ctx.inv.x, "whole graph")])
}

fn z_x_bound(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    min_vertices(ctx, 2)?;
    let lambda = ctx.lambda().finite().expect("two or more vertices") as f64;
    Ok(vec![Instance::ge(ctx.inv.z, lambda / (ctx.v() as f64 - 1.0) * ctx.inv.x, "whole graph")])
}

fn ahm(ctx: &Context) -> Instances {
    nested_ready(ctx, 2)?;
    let lengths: Vec<f64> = ctx.g.lengths().collect();
    Ok(admissible_levels(ctx)?
        .into_iter()
        .map(|(seq, l)| {
            let r = l.pair_resistance.expect("admissible contractions end with two vertices");
            let n = l.parallel as f64;
            // L²/(L+R) = L (1 - R/(L+R))
            let lhs: f64 = l.weights.iter().map(|&(k, w)| lengths[k] * (1.0 - w)).sum();
            Instance::ge(lhs, n * (n - 1.0) * r, format!("after contracting {seq:?}"))
        })
        .collect())
}

fn norm2term(ctx: &Context) -> Instances {
    let h = ctx.g.normalize();
    let s = EdgeSums::from_data(&CircuitAnalysis::new(&h)?.all_edge_data(0));
    Ok(vec![Instance::ge(s.square, s.r * s.r, "normalized graph")])
}

fn val_partition(ctx: &Context) -> Instances {
    let v = ctx.v();
    let per_base: Vec<Vec<EdgeCircuitData>> = (0..v).map(|p| ctx.analysis.all_edge_data(p)).collect();
    let square: f64 = ctx.data.iter().map(|d| d.resistance_square_term()).sum();
    let mut away = 0.0;
    for (q, data) in per_base.iter().enumerate() {
        away += data
            .iter()
            .filter(|d| !ctx.g.edges()[d.edge.0].is_incident(q))
            .map(|d| d.arm_skew_term())
            .sum::<f64>();
    }
    let rhs = 2.0 / v as f64 * square + away / v as f64;
    Ok(per_base
        .iter()
        .enumerate()
        .map(|(p, data)| Instance::eq(data.iter().map(|d| d.arm_skew_term()).sum(), rhs, format!("base {p}")))
        .collect())
}

fn edgecon11(ctx: &Context) -> Instances {
    bridgeless(ctx)?;
    min_vertices(ctx, 2)?;
    let h = ctx.g.normalize();
    let v = h.vertex_count() as f64;
    let g = h.genus() as f64;
    let lambda = ctx.lambda().finite().expect("two or more vertices") as f64;
    let inv = InvariantSet::compute(&h, 0)?;
    let (x, y) = (inv.x, inv.y);
    let t = if h.vertex_count() <= CONTRACTION_ORACLE_MAX_VERTICES {
        tau_oracle_contraction(&h)?
    } else {
        tau_at(&h, h.vertex_count() - 1)?
    };
    Ok(vec![
        Instance::eq(t, 1.0 / 12.0 - x / 6.0 + y / 6.0, "tau in terms of x, y"),
        Instance::ge(1.0, (lambda + v - 1.0) / (v - 1.0) * x + y, "1 >= ((L+v-1)/(v-1)) x + y"),
        Instance::ge(x, 0.0, "x >= 0"),
        Instance::ge(y, 0.0, "y >= 0"),
        Instance::ge(y, (v + 6.0) / (4.0 * v) * (x + y) * (x + y), "y >= ((v+6)/(4v)) (x+y)^2"),
        Instance::ge(g * y, x, "g y >= x"),
        Instance::ge(x, (lambda - 1.0) * y, "x >= (L-1) y"),
    ])
}
