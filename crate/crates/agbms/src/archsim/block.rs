//! a parallel blocks, one pair of multipliers per coefficient stream each.
//! Block i keeps V^(i); its w/g register holds W^(ibar) and hands its output
//! to block i + b^-1 so the pairing follows ibar as N grows.

use std::collections::VecDeque;

use super::{
    initial_v, initial_w, ArchKind, ArchTrace, Assembler, Control, Latch, Meter, RegDump, RegisterCounts, SimError,
    SimOptions, Snapshot, Switches,
};
use crate::agcode::{CodeSpec, SyndromeTable};
use crate::galois::FieldElem;

pub fn sim_inverse_free(code: &CodeSpec, synd: &SyndromeTable, opts: SimOptions) -> Result<ArchTrace, SimError> {
    let curve = &code.curve;
    let field = curve.field();
    let a = curve.a() as usize;
    if a < 2 {
        return Err(SimError::TooFewBlocks);
    }
    let m = code.m;
    let binv = curve.binv() as usize;
    let len_vf = (m + 2) as usize;
    let len_wg = (m + 3) as usize;
    let period = len_wg as u64;
    let total = (m as u64 + 1) * period;
    let ibar = |i: usize, n: i64| curve.ibar(i as u32, n) as usize;

    let mut vf: Vec<VecDeque<FieldElem>> = Vec::with_capacity(a);
    let mut wg: Vec<VecDeque<FieldElem>> = Vec::with_capacity(a);
    for i in 0..a {
        vf.push((0..len_vf as i64).map(|r| initial_v(code, synd, i, r)).collect::<Result<_, _>>()?);
        wg.push((0..len_wg as i64).map(initial_w).collect());
    }

    let mut ctrl = Control::new(code);
    let mut meter = Meter::new(2 * a as u32);
    let mut snapshots = Vec::new();
    let mut boundaries = Vec::new();
    let mut latches = Vec::new();
    let mut d = vec![FieldElem::ZERO; a];
    let mut e = vec![FieldElem::ZERO; a];
    let mut keep = vec![true; a];

    let assemble = |n: i64, vf: &[VecDeque<FieldElem>], wg: &[VecDeque<FieldElem>], ctrl: &Control| {
        let mut asm = Assembler::new(a, n, m);
        for b in 0..a {
            for (p, &v) in vf[b].iter().enumerate() {
                asm.put_v(b, p as i64, v);
            }
            for (p, &v) in wg[b].iter().enumerate() {
                asm.put_w(ibar(b, n), p as i64, v);
            }
        }
        asm.finish(ctrl)
    };

    for clock in 0..total {
        let n = (clock / period) as i64;
        let r = (clock % period) as i64;
        if r == 0 {
            boundaries.push(assemble(n, &vf, &wg, &ctrl)?);
        }
        let zero_set = r == m - n && n < m;
        if opts.record {
            let mut regs = Vec::new();
            let mut switches = Vec::new();
            for b in 0..a {
                regs.push(RegDump { block: b, name: "vf", values: vf[b].iter().copied().collect() });
                regs.push(RegDump { block: b, name: "wg", values: wg[b].iter().copied().collect() });
                switches.push(Switches {
                    discrepancy: r == 0,
                    update: r > 0 && !keep[b],
                    exchange: false,
                    zero_set,
                });
            }
            snapshots.push(Snapshot { clock, regs, switches });
        }

        let mut outs = Vec::with_capacity(a);
        meter.begin();
        for b in 0..a {
            let x = vf[b].pop_front().expect("vf register");
            let y = wg[b].pop_front().expect("wg register");
            let (x_out, mut y_out) = if r == 0 {
                let dec = ctrl.decide(code, n, b, ibar(b, n), x, y);
                d[b] = dec.d;
                e[b] = dec.e;
                keep[b] = dec.keep;
                latches.push(Latch { clock, n, label: b, d: dec.d, e: dec.e });
                (FieldElem::ZERO, if dec.keep { y } else { x })
            } else {
                meter.mul(2);
                let xo = field.add(field.mul(e[b], x), field.mul(d[b], y));
                (xo, if keep[b] { y } else { x })
            };
            if zero_set {
                y_out = FieldElem::ZERO;
            }
            outs.push((x_out, y_out));
        }
        meter.end(clock)?;
        for (b, (xo, yo)) in outs.into_iter().enumerate() {
            vf[b].push_back(xo);
            wg[(b + binv) % a].push_back(yo);
        }
        if r == period as i64 - 1 {
            ctrl.commit();
        }
    }
    boundaries.push(assemble(m + 1, &vf, &wg, &ctrl)?);

    Ok(ArchTrace {
        arch: ArchKind::InverseFree,
        period,
        total_clocks: total,
        boundary_states: boundaries,
        g_origin: ctrl.g_origin.clone(),
        latches,
        snapshots,
        registers: RegisterCounts { vf: a * len_vf, wg: a * len_wg, exchange: 0, supplementary: 0 },
        mult_budget: meter.budget,
        max_mults_per_clock: meter.max,
        mult_uses: meter.uses,
        inv_uses: meter.invs,
        replacements: ctrl.replacements,
    })
}
