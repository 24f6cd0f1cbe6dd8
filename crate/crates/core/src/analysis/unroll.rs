use crate::error::{Error, Result};
use crate::netlist::{Circuit, GateKind, Netlist, Role, Source};

/// Chains `r` copies of the logic of an all-simple circuit so that one
/// round of the result yields the outputs of `r` rounds of `c`.
///
/// Copy `t` (1-based) has its gates prefixed `u{t}_`. From the second copy
/// on, each local register is read through a BUF gate `u{t}_<reg>` fed by
/// the previous copy's driver. Outputs of all but the last copy go to sink
/// BUF gates of the same naming scheme and are ignored.
pub fn unroll(c: &Circuit, r: usize) -> Result<Circuit> {
    if r == 0 {
        return Err(Error::InvalidArgument("unrolling needs at least one round".into()));
    }
    if let Some(reg) = c.registers().iter().find(|reg| reg.rtype.is_masking()) {
        return Err(Error::MaskingRegister(reg.name.clone()));
    }
    let regs = c.registers();
    let m = c.input_count();
    let mut net = Netlist::new(format!("{}_x{r}", c.name()));
    net.registers = regs.to_vec();

    // Name of the node that the current copy reads for register i.
    let mut read_name: Vec<String> = regs[..c.read_width()].iter().map(|reg| reg.name.clone()).collect();
    let mut drivers: Vec<String> = Vec::new();
    for t in 1..=r {
        let prefix = format!("u{t}_");
        if t > 1 {
            for (i, d) in drivers.iter().enumerate() {
                let reg = &regs[m + i];
                if reg.role == Role::Local {
                    let seam = format!("{prefix}{}", reg.name);
                    net.gate(&seam, GateKind::Buf, &[d]);
                    read_name[m + i] = seam;
                } else {
                    net.gate(format!("u{}_{}", t - 1, reg.name), GateKind::Buf, &[d]);
                }
            }
        }
        let name_of = |s: Source| match s {
            Source::Register(i) => read_name[i].clone(),
            Source::Gate(g) => format!("{prefix}{}", c.gates()[g].id),
        };
        for g in c.gates() {
            let srcs: Vec<String> = g.inputs.iter().map(|&s| name_of(s)).collect();
            net.gate(format!("{prefix}{}", g.id), g.kind.clone(), &srcs);
        }
        drivers = c.drives().iter().map(|&s| name_of(s)).collect();
    }
    for (i, d) in drivers.iter().enumerate() {
        net.drive(regs[m + i].name.clone(), d.clone());
    }
    net.build()
}
