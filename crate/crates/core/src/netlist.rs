//! Circuit structure: register declarations, the combinational DAG and the
//! line-oriented netlist format.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ternary::{kleene_extend, significant_lines, Ternary, TernaryWord, TruthTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Input,
    Local,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegisterType {
    Simple,
    Mask0,
    Mask1,
}

impl RegisterType {
    pub fn is_masking(self) -> bool {
        self != RegisterType::Simple
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Input => "input",
            Role::Local => "local",
            Role::Output => "output",
        })
    }
}

impl fmt::Display for RegisterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegisterType::Simple => "simple",
            RegisterType::Mask0 => "mask0",
            RegisterType::Mask1 => "mask1",
        })
    }
}

impl FromStr for RegisterType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "simple" => Ok(RegisterType::Simple),
            "mask0" => Ok(RegisterType::Mask0),
            "mask1" => Ok(RegisterType::Mask1),
            _ => Err(format!("unknown register type `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterDecl {
    pub name: String,
    pub role: Role,
    pub rtype: RegisterType,
    /// Initial state; `None` for input registers.
    pub init: Option<Ternary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
    Nand,
    Nor,
    Xor,
    Buf,
    Const0,
    Const1,
    Table(TruthTable),
}

impl GateKind {
    /// Required fan-in, or `None` for "at least two".
    pub fn fan_in(&self) -> Option<usize> {
        match self {
            GateKind::And | GateKind::Or | GateKind::Nand | GateKind::Nor => None,
            GateKind::Not | GateKind::Buf => Some(1),
            GateKind::Xor => Some(2),
            GateKind::Const0 | GateKind::Const1 => Some(0),
            GateKind::Table(t) => Some(t.arity()),
        }
    }

    /// Kleene-extended gate function.
    pub fn eval(&self, inputs: &[Ternary]) -> Ternary {
        use Ternary::*;
        match self {
            GateKind::And => inputs.iter().fold(One, |a, &b| a.and(b)),
            GateKind::Or => inputs.iter().fold(Zero, |a, &b| a.or(b)),
            GateKind::Nand => !inputs.iter().fold(One, |a, &b| a.and(b)),
            GateKind::Nor => !inputs.iter().fold(Zero, |a, &b| a.or(b)),
            GateKind::Xor => inputs[0].xor(inputs[1]),
            GateKind::Not => !inputs[0],
            GateKind::Buf => inputs[0],
            GateKind::Const0 => Zero,
            GateKind::Const1 => One,
            GateKind::Table(t) => kleene_extend(t, &TernaryWord::from_digits(inputs.iter().copied()))
                .expect("fan-in checked at validation"),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::And => f.write_str("AND"),
            GateKind::Or => f.write_str("OR"),
            GateKind::Not => f.write_str("NOT"),
            GateKind::Nand => f.write_str("NAND"),
            GateKind::Nor => f.write_str("NOR"),
            GateKind::Xor => f.write_str("XOR"),
            GateKind::Buf => f.write_str("BUF"),
            GateKind::Const0 => f.write_str("CONST0"),
            GateKind::Const1 => f.write_str("CONST1"),
            GateKind::Table(t) => write!(f, "TABLE:{t}"),
        }
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NOT" => GateKind::Not,
            "NAND" => GateKind::Nand,
            "NOR" => GateKind::Nor,
            "XOR" => GateKind::Xor,
            "BUF" => GateKind::Buf,
            "CONST0" => GateKind::Const0,
            "CONST1" => GateKind::Const1,
            _ => match s.strip_prefix("TABLE:") {
                Some(bits) => GateKind::Table(TruthTable::parse(bits).map_err(|e| e.to_string())?),
                None => return Err(format!("unknown gate kind `{s}`")),
            },
        })
    }
}

/// A structural defect found by [`Netlist::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateName(String),
    /// The same register is declared with two roles, e.g. as input and output.
    RoleConflict {
        name: String,
        roles: (Role, Role),
    },
    InputHasInit(String),
    MissingInit(String),
    UnknownSource {
        user: String,
        source: String,
    },
    /// Output registers are not inputs of the combinational logic.
    ReadsOutput {
        user: String,
        register: String,
    },
    FanIn {
        gate: String,
        expected: String,
        found: usize,
    },
    Cycle(Vec<String>),
    MissingDrive(String),
    DuplicateDrive(String),
    DrivesInput(String),
    DrivesUnknown(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName(n) => write!(f, "name `{n}` declared twice"),
            Violation::RoleConflict { name, roles } => {
                write!(f, "register `{name}` declared as both {} and {}", roles.0, roles.1)
            }
            Violation::InputHasInit(n) => write!(f, "input register `{n}` must not have an initial value"),
            Violation::MissingInit(n) => write!(f, "register `{n}` needs an initial value"),
            Violation::UnknownSource { user, source } => {
                write!(f, "`{user}` references undeclared `{source}`")
            }
            Violation::ReadsOutput { user, register } => {
                write!(f, "`{user}` reads output register `{register}`")
            }
            Violation::FanIn { gate, expected, found } => {
                write!(f, "gate `{gate}` expects {expected} inputs, has {found}")
            }
            Violation::Cycle(gates) => write!(f, "combinational cycle through {}", gates.join(", ")),
            Violation::MissingDrive(n) => write!(f, "register `{n}` is not driven"),
            Violation::DuplicateDrive(n) => write!(f, "register `{n}` is driven twice"),
            Violation::DrivesInput(n) => write!(f, "input register `{n}` cannot be driven"),
            Violation::DrivesUnknown(n) => write!(f, "drive of undeclared register `{n}`"),
        }
    }
}

/// Name-based circuit description, as written in a netlist file. It may be
/// invalid; [`Netlist::build`] validates it into a [`Circuit`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Netlist {
    pub name: String,
    pub registers: Vec<RegisterDecl>,
    /// `(id, kind, sources)`
    pub gates: Vec<(String, GateKind, Vec<String>)>,
    /// `(register, source)`
    pub drives: Vec<(String, String)>,
}

impl Netlist {
    pub fn new(name: impl Into<String>) -> Self {
        Netlist {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, name: impl Into<String>, rtype: RegisterType) -> &mut Self {
        self.register(name, Role::Input, rtype, None)
    }

    pub fn local(&mut self, name: impl Into<String>, rtype: RegisterType, init: Ternary) -> &mut Self {
        self.register(name, Role::Local, rtype, Some(init))
    }

    pub fn output(&mut self, name: impl Into<String>, rtype: RegisterType, init: Ternary) -> &mut Self {
        self.register(name, Role::Output, rtype, Some(init))
    }

    pub fn register(
        &mut self,
        name: impl Into<String>,
        role: Role,
        rtype: RegisterType,
        init: Option<Ternary>,
    ) -> &mut Self {
        self.registers.push(RegisterDecl {
            name: name.into(),
            role,
            rtype,
            init,
        });
        self
    }

    pub fn gate<S: AsRef<str>>(&mut self, id: impl Into<String>, kind: GateKind, sources: &[S]) -> &mut Self {
        self.gates.push((
            id.into(),
            kind,
            sources.iter().map(|s| s.as_ref().to_string()).collect(),
        ));
        self
    }

    pub fn drive(&mut self, register: impl Into<String>, source: impl Into<String>) -> &mut Self {
        self.drives.push((register.into(), source.into()));
        self
    }

    /// Copies the logic of a circuit without local registers into this
    /// netlist. Gate ids get `prefix`; the circuit's input registers are
    /// replaced by `inputs`. Returns the sources that drive its outputs.
    pub fn instantiate<S: AsRef<str>>(&mut self, sub: &Circuit, prefix: &str, inputs: &[S]) -> Result<Vec<String>> {
        if sub.local_count() != 0 {
            return Err(Error::InvalidArgument(format!(
                "cannot instantiate `{}`: it has local registers",
                sub.name()
            )));
        }
        if inputs.len() != sub.input_count() {
            return Err(Error::ArityMismatch(format!(
                "`{}` has {} inputs, {} connected",
                sub.name(),
                sub.input_count(),
                inputs.len()
            )));
        }
        let name_of = |s: Source| match s {
            Source::Register(i) => inputs[i].as_ref().to_string(),
            Source::Gate(g) => format!("{prefix}{}", sub.gates[g].id),
        };
        for g in &sub.gates {
            let sources: Vec<String> = g.inputs.iter().map(|&s| name_of(s)).collect();
            self.gate(format!("{prefix}{}", g.id), g.kind.clone(), &sources);
        }
        Ok(sub.drives.iter().map(|&s| name_of(s)).collect())
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.resolve().err().unwrap_or_default()
    }

    pub fn build(&self) -> Result<Circuit> {
        self.resolve().map_err(Error::InvalidCircuit)
    }

    fn resolve(&self) -> std::result::Result<Circuit, Vec<Violation>> {
        let mut v = Vec::new();

        let mut roles: HashMap<&str, Role> = HashMap::new();
        for r in &self.registers {
            if let Some(&prev) = roles.get(r.name.as_str()) {
                if prev != r.role {
                    v.push(Violation::RoleConflict {
                        name: r.name.clone(),
                        roles: (prev.min(r.role), prev.max(r.role)),
                    });
                } else {
                    v.push(Violation::DuplicateName(r.name.clone()));
                }
                continue;
            }
            roles.insert(&r.name, r.role);
            match (r.role, r.init) {
                (Role::Input, Some(_)) => v.push(Violation::InputHasInit(r.name.clone())),
                (Role::Local | Role::Output, None) => v.push(Violation::MissingInit(r.name.clone())),
                _ => {}
            }
        }

        // Stable sort by role keeps declaration order within each role.
        let mut registers: Vec<RegisterDecl> = Vec::new();
        for r in &self.registers {
            if !registers.iter().any(|x| x.name == r.name) {
                registers.push(r.clone());
            }
        }
        registers.sort_by_key(|r| r.role);
        let reg_index: HashMap<&str, usize> = registers
            .iter()
            .enumerate()
            .map(|(i, r)| (r.name.as_str(), i))
            .collect();
        let readable = registers.iter().filter(|r| r.role != Role::Output).count();

        let mut gate_index: HashMap<&str, usize> = HashMap::new();
        for (i, (id, _, _)) in self.gates.iter().enumerate() {
            if roles.contains_key(id.as_str()) || gate_index.insert(id, i).is_some() {
                v.push(Violation::DuplicateName(id.clone()));
            }
        }

        let source = |user: &str, s: &str, v: &mut Vec<Violation>| -> Option<Source> {
            if let Some(&g) = gate_index.get(s) {
                Some(Source::Gate(g))
            } else if let Some(&r) = reg_index.get(s) {
                if r >= readable {
                    v.push(Violation::ReadsOutput {
                        user: user.to_string(),
                        register: s.to_string(),
                    });
                    None
                } else {
                    Some(Source::Register(r))
                }
            } else {
                v.push(Violation::UnknownSource {
                    user: user.to_string(),
                    source: s.to_string(),
                });
                None
            }
        };

        let mut gates = Vec::with_capacity(self.gates.len());
        for (id, kind, srcs) in &self.gates {
            let ok = match kind.fan_in() {
                Some(n) => srcs.len() == n,
                None => srcs.len() >= 2,
            };
            if !ok {
                v.push(Violation::FanIn {
                    gate: id.clone(),
                    expected: kind.fan_in().map_or("at least 2".to_string(), |n| n.to_string()),
                    found: srcs.len(),
                });
            }
            let inputs: Vec<Source> = srcs.iter().filter_map(|s| source(id, s, &mut v)).collect();
            gates.push(Gate {
                id: id.clone(),
                kind: kind.clone(),
                inputs,
            });
        }

        let first_written = registers.iter().filter(|r| r.role == Role::Input).count();
        let mut drives: Vec<Option<Source>> = vec![None; registers.len() - first_written];
        for (reg, src) in &self.drives {
            match reg_index.get(reg.as_str()) {
                None => v.push(Violation::DrivesUnknown(reg.clone())),
                Some(&r) if r < first_written => v.push(Violation::DrivesInput(reg.clone())),
                Some(&r) => {
                    let s = source(reg, src, &mut v);
                    if drives[r - first_written].is_some() {
                        v.push(Violation::DuplicateDrive(reg.clone()));
                    } else if s.is_some() {
                        drives[r - first_written] = s;
                    }
                }
            }
        }
        for (i, d) in drives.iter().enumerate() {
            let name = &registers[first_written + i].name;
            if d.is_none() && !self.drives.iter().any(|(r, _)| r == name) {
                v.push(Violation::MissingDrive(name.clone()));
            }
        }

        let order = match topological_order(&gates) {
            Ok(o) => o,
            Err(cycle) => {
                v.push(Violation::Cycle(cycle.iter().map(|&g| gates[g].id.clone()).collect()));
                Vec::new()
            }
        };

        if !v.is_empty() {
            return Err(v);
        }
        let counts =
            [Role::Input, Role::Local, Role::Output].map(|role| registers.iter().filter(|r| r.role == role).count());
        Ok(Circuit {
            name: self.name.clone(),
            registers,
            gates,
            drives: drives.into_iter().map(|d| d.expect("checked")).collect(),
            order,
            counts,
        })
    }
}

/// Kahn's algorithm with smallest-index tie breaking, so the order is a
/// function of the declaration order alone. On failure returns the gates
/// that lie on or behind a cycle.
fn topological_order(gates: &[Gate]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let mut indegree = vec![0usize; gates.len()];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    for (i, g) in gates.iter().enumerate() {
        for s in &g.inputs {
            if let Source::Gate(p) = *s {
                indegree[i] += 1;
                users[p].push(i);
            }
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..gates.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(g) = ready.pop_first() {
        order.push(g);
        for &u in &users[g] {
            indegree[u] -= 1;
            if indegree[u] == 0 {
                ready.insert(u);
            }
        }
    }
    if order.len() == gates.len() {
        Ok(order)
    } else {
        Err((0..gates.len()).filter(|&i| indegree[i] > 0).collect())
    }
}

/// Where a gate input or register drive comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    /// Index into the read word `In ∘ Loc`.
    Register(usize),
    Gate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<Source>,
}

/// A validated circuit. Registers are ordered `Input ∘ Local ∘ Output`; the
/// combinational logic maps the read word `In ∘ Loc` to the written word
/// `Loc ∘ Out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    name: String,
    registers: Vec<RegisterDecl>,
    gates: Vec<Gate>,
    drives: Vec<Source>,
    order: Vec<usize>,
    counts: [usize; 3],
}

impl Circuit {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn registers(&self) -> &[RegisterDecl] {
        &self.registers
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Drivers of the non-input registers, in register order.
    pub fn drives(&self) -> &[Source] {
        &self.drives
    }

    pub fn input_count(&self) -> usize {
        self.counts[0]
    }

    pub fn local_count(&self) -> usize {
        self.counts[1]
    }

    pub fn output_count(&self) -> usize {
        self.counts[2]
    }

    /// Width of the read word `In ∘ Loc`.
    pub fn read_width(&self) -> usize {
        self.counts[0] + self.counts[1]
    }

    /// Width of the written word `Loc ∘ Out`.
    pub fn write_width(&self) -> usize {
        self.counts[1] + self.counts[2]
    }

    pub fn state_width(&self) -> usize {
        self.registers.len()
    }

    pub fn is_all_simple(&self) -> bool {
        self.registers.iter().all(|r| !r.rtype.is_masking())
    }

    /// Initial state `Loc ∘ Out` of the non-input registers.
    pub fn initial(&self) -> TernaryWord {
        TernaryWord::from_digits(
            self.registers[self.counts[0]..]
                .iter()
                .map(|r| r.init.expect("validated")),
        )
    }

    /// The same circuit with every masking register replaced by a simple one.
    pub fn simple_copy(&self) -> Circuit {
        let mut c = self.clone();
        for r in &mut c.registers {
            r.rtype = RegisterType::Simple;
        }
        c
    }

    /// Evaluates the combinational logic on the read word `In ∘ Loc`.
    pub fn eval_dag(&self, x: &TernaryWord) -> Result<TernaryWord> {
        if x.width() != self.read_width() {
            return Err(Error::WidthMismatch {
                expected: self.read_width(),
                found: x.width(),
            });
        }
        let reads: Vec<Ternary> = x.iter().collect();
        let values = self.gate_values(&reads);
        let value = |s: Source| match s {
            Source::Register(i) => reads[i],
            Source::Gate(g) => values[g],
        };
        Ok(TernaryWord::from_digits(self.drives.iter().map(|&s| value(s))))
    }

    fn gate_values(&self, reads: &[Ternary]) -> Vec<Ternary> {
        let mut values = vec![Ternary::Zero; self.gates.len()];
        let mut args = Vec::new();
        for &g in &self.order {
            let gate = &self.gates[g];
            args.clear();
            args.extend(gate.inputs.iter().map(|&s| match s {
                Source::Register(i) => reads[i],
                Source::Gate(p) => values[p],
            }));
            values[g] = gate.kind.eval(&args);
        }
        values
    }

    /// Longest number of gates on any path from a register to a register.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.gates.len()];
        for &g in &self.order {
            level[g] = 1 + self.gates[g]
                .inputs
                .iter()
                .map(|&s| match s {
                    Source::Register(_) => 0,
                    Source::Gate(p) => level[p],
                })
                .max()
                .unwrap_or(0);
        }
        self.drives
            .iter()
            .map(|&s| match s {
                Source::Register(_) => 0,
                Source::Gate(g) => level[g],
            })
            .max()
            .unwrap_or(0)
    }

    fn source_name(&self, s: Source) -> &str {
        match s {
            Source::Register(i) => &self.registers[i].name,
            Source::Gate(g) => &self.gates[g].id,
        }
    }

    pub fn to_netlist(&self) -> Netlist {
        let mut n = Netlist::new(&self.name);
        n.registers = self.registers.clone();
        for g in &self.gates {
            let srcs: Vec<&str> = g.inputs.iter().map(|&s| self.source_name(s)).collect();
            n.gate(&g.id, g.kind.clone(), &srcs);
        }
        let first = self.input_count();
        for (i, &s) in self.drives.iter().enumerate() {
            n.drive(&self.registers[first + i].name, self.source_name(s));
        }
        n
    }

    pub fn emit(&self) -> String {
        emit_netlist(&self.to_netlist())
    }

    /// The same circuit under a new name with registers renamed, in
    /// register order.
    pub fn renamed<S: AsRef<str>>(&self, name: &str, registers: &[S]) -> Result<Circuit> {
        if registers.len() != self.registers.len() {
            return Err(Error::ArityMismatch(format!(
                "{} names for {} registers",
                registers.len(),
                self.registers.len()
            )));
        }
        let mut c = self.clone();
        c.name = name.to_string();
        for (r, n) in c.registers.iter_mut().zip(registers) {
            r.name = n.as_ref().to_string();
        }
        c.to_netlist().build()
    }
}

pub fn emit_netlist(n: &Netlist) -> String {
    let mut out = format!("circuit {}\n", n.name);
    for r in &n.registers {
        out.push_str(&format!("{} {} {}", r.role, r.name, r.rtype));
        if let Some(init) = r.init {
            out.push_str(&format!(" init {init}"));
        }
        out.push('\n');
    }
    for (id, kind, srcs) in &n.gates {
        out.push_str(&format!("gate {id} {kind}"));
        for s in srcs {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
    }
    for (reg, src) in &n.drives {
        out.push_str(&format!("drive {reg} {src}\n"));
    }
    out
}

/// Parses the netlist format into an unvalidated description. References
/// to undeclared names are reported with the line that uses them.
pub fn parse_netlist_raw(text: &str) -> Result<Netlist> {
    let mut n = Netlist::default();
    let mut seen_header = false;
    let mut uses: Vec<(usize, String)> = Vec::new();
    for (line, content) in significant_lines(text) {
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "circuit" => {
                if seen_header {
                    return Err(Error::parse(line, "duplicate `circuit` line"));
                }
                if toks.len() != 2 {
                    return Err(Error::parse(line, "expected `circuit <name>`"));
                }
                n.name = toks[1].to_string();
                seen_header = true;
            }
            "input" => {
                if toks.len() != 3 {
                    return Err(Error::parse(line, "expected `input <reg> <type>`"));
                }
                let rtype = toks[2].parse().map_err(|e: String| Error::parse(line, e))?;
                n.input(toks[1], rtype);
            }
            role @ ("local" | "output") => {
                if toks.len() != 5 || toks[3] != "init" {
                    return Err(Error::parse(
                        line,
                        format!("expected `{role} <reg> <type> init <0|1|M>`"),
                    ));
                }
                let rtype = toks[2].parse().map_err(|e: String| Error::parse(line, e))?;
                let init = match toks[4] {
                    s if s.chars().count() == 1 => Ternary::from_char(s.chars().next().unwrap()),
                    _ => None,
                }
                .ok_or_else(|| Error::parse(line, format!("invalid initial value `{}`", toks[4])))?;
                let role = if role == "local" { Role::Local } else { Role::Output };
                n.register(toks[1], role, rtype, Some(init));
            }
            "gate" => {
                if toks.len() < 3 {
                    return Err(Error::parse(line, "expected `gate <id> <KIND> <src>...`"));
                }
                let kind: GateKind = toks[2].parse().map_err(|e: String| Error::parse(line, e))?;
                n.gate(toks[1], kind, &toks[3..]);
                uses.extend(toks[3..].iter().map(|s| (line, s.to_string())));
            }
            "drive" => {
                if toks.len() != 3 {
                    return Err(Error::parse(line, "expected `drive <reg> <src>`"));
                }
                n.drive(toks[1], toks[2]);
                uses.push((line, toks[1].to_string()));
                uses.push((line, toks[2].to_string()));
            }
            other => return Err(Error::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    if !seen_header {
        return Err(Error::parse(1, "missing `circuit <name>` line"));
    }
    for (line, name) in uses {
        let known = n.registers.iter().any(|r| r.name == name) || n.gates.iter().any(|g| g.0 == name);
        if !known {
            return Err(Error::parse(line, format!("undeclared register or gate `{name}`")));
        }
    }
    Ok(n)
}

/// Parses and validates a netlist.
pub fn parse_netlist(text: &str) -> Result<Circuit> {
    parse_netlist_raw(text)?.build()
}
