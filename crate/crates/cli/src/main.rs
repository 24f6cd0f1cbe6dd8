use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mc_core::analysis::{
    closure_bool, find_natural_subfunction, is_natural, metastable_witness, synthesize, unroll, Witness,
};
use mc_core::components::{self, ClockSync, TdcReading};
use mc_core::executor::{implements, Exploration, Verdict};
use mc_core::function::{self, FunctionSpec};
use mc_core::netlist::{parse_netlist, Circuit};
use mc_core::ternary::{BooleanFunction, Code, TernaryWord};
use mc_core::{Budget, Error};

#[derive(Parser, Debug)]
#[command(name = "mc", version, about = "Metastability-containing circuit analysis")]
struct Cli {
    /// Limit on explored states and search nodes.
    #[arg(long, global = true, default_value_t = Budget::default().max_states)]
    max_states: usize,
    /// Limit on metastable bits expanded at once.
    #[arg(long, global = true, default_value_t = Budget::default().max_meta_bits)]
    max_meta_bits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reachable states and outputs for each round.
    Sim {
        netlist: PathBuf,
        input: String,
        rounds: usize,
        /// Write one execution reaching the final round.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Report whether each round's state set contains this state.
        #[arg(long)]
        contains: Option<String>,
    },
    /// Whether `rounds` rounds of a circuit implement a specification.
    Check {
        netlist: PathBuf,
        spec: PathBuf,
        rounds: usize,
    },
    /// Metastable closure of a Boolean truth table.
    Closure {
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One-round circuit for a specification with a natural subfunction.
    Synth {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One-round equivalent of an all-simple circuit run for `rounds` rounds.
    Unroll {
        netlist: PathBuf,
        rounds: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Execution with a metastable output, for inputs with disjoint outputs.
    Witness {
        netlist: PathBuf,
        input: String,
        other: String,
        rounds: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a library component.
    Component {
        name: ComponentName,
        params: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Report)]
        emit: Emit,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Select the clock-sync order statistics from thermometer readings.
    Pipeline {
        #[arg(long)]
        faults: usize,
        /// BRGC width; readings have 2^bits - 1 bits.
        #[arg(long)]
        bits: usize,
        readings: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComponentName {
    Mux,
    Cmux,
    CmuxClocked,
    Fanout,
    Counter,
    Selector,
    Tc2brgc,
    TwoSort,
    Sortnet,
    Brgc2tc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Netlist,
    Report,
}

/// Exit status and the text printed on success.
struct Outcome {
    code: u8,
    stdout: String,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome { code: 0, stdout }
    }

    fn fail(stdout: String) -> Self {
        Outcome { code: 1, stdout }
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Budget { .. }) => 3,
            Failure::Core(Error::NotNatural | Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    Ok(parse_netlist(&read(path)?)?)
}

fn parse_word(s: &str) -> Result<TernaryWord> {
    Ok(s.parse()?)
}

/// Key-value report lines.
#[derive(Default)]
struct Report(String);

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.kv("command", command);
        r
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.0, "{key}: {value}").expect("string write");
        self
    }

    fn finish(self) -> String {
        self.0
    }
}

/// Writes `artifact` to `output`, or returns it as the whole of stdout.
fn deliver(report: Report, artifact: &str, output: Option<&Path>) -> Result<String> {
    match output {
        Some(path) => {
            write(path, artifact)?;
            let mut report = report;
            report.kv("written", path.display());
            Ok(report.finish())
        }
        None => Ok(artifact.to_string()),
    }
}

struct SimArgs<'a> {
    trace: Option<&'a Path>,
    contains: Option<&'a str>,
}

fn sim(netlist: &Path, input: &str, rounds: usize, args: SimArgs, budget: &Budget) -> Result<Outcome> {
    let c = load_circuit(netlist)?;
    let iota = parse_word(input)?;
    let probe = args.contains.map(parse_word).transpose()?;
    let e = Exploration::run(&c, &iota, rounds, budget)?;
    let mut r = Report::new(&format!("sim {} {input} {rounds}", netlist.display()));
    r.kv("circuit", c.name()).kv("input", &iota);
    for t in 0..=rounds {
        let layer = e.layer(t);
        r.kv(&format!("round.{t}.states"), &layer);
        if let Some(p) = &probe {
            r.kv(&format!("round.{t}.contains.{p}"), layer.contains(p));
        }
        if t > 0 {
            r.kv(&format!("round.{t}.outputs"), layer.outputs(c.output_count()));
        }
    }
    if let Some(path) = args.trace {
        write(path, &e.trace_to(0).emit())?;
        r.kv("trace", path.display());
    }
    Ok(Outcome::pass(r.finish()))
}

fn check(netlist: &Path, spec: &Path, rounds: usize, budget: &Budget) -> Result<Outcome> {
    let c = load_circuit(netlist)?;
    let f = FunctionSpec::parse(&read(spec)?)?;
    let mut r = Report::new(&format!("check {} {} {rounds}", netlist.display(), spec.display()));
    r.kv("circuit", c.name()).kv("rounds", rounds);
    Ok(match implements(&c, rounds, &f, budget)? {
        Verdict::Implements => {
            r.kv("verdict", "implements");
            Outcome::pass(r.finish())
        }
        Verdict::Counterexample { input, output } => {
            r.kv("verdict", "counterexample")
                .kv("input", input)
                .kv("output", output);
            Outcome::fail(r.finish())
        }
    })
}

fn closure(table: &Path, output: Option<&Path>) -> Result<Outcome> {
    let f = BooleanFunction::parse(&read(table)?)?;
    let h = closure_bool(&f);
    let mut r = Report::new(&format!("closure {}", table.display()));
    r.kv("inputs", h.inputs()).kv("outputs", h.outputs());
    Ok(Outcome::pass(deliver(r, &h.emit(), output)?))
}

fn synth(spec: &Path, output: Option<&Path>, budget: &Budget) -> Result<Outcome> {
    let g = FunctionSpec::parse(&read(spec)?)?;
    let mut r = Report::new(&format!("synth {}", spec.display()));
    let h = if is_natural(&g) {
        g.clone()
    } else {
        match find_natural_subfunction(&g, budget)? {
            Some(h) => h,
            None => {
                r.kv("verdict", "no natural subfunction");
                return Ok(Outcome::fail(r.finish()));
            }
        }
    };
    let c = synthesize(&h, budget)?;
    if !implements(&c, 1, &g, budget)?.holds() {
        return Err(Error::Internal("synthesized circuit does not implement the specification".into()).into());
    }
    r.kv("verdict", "implements")
        .kv("gates", c.gates().len())
        .kv("depth", c.depth());
    Ok(Outcome::pass(deliver(r, &c.emit(), output)?))
}

fn unroll_cmd(netlist: &Path, rounds: usize, output: Option<&Path>) -> Result<Outcome> {
    let c = load_circuit(netlist)?;
    let u = unroll(&c, rounds)?;
    let mut r = Report::new(&format!("unroll {} {rounds}", netlist.display()));
    r.kv("circuit", u.name()).kv("gates", u.gates().len());
    Ok(Outcome::pass(deliver(r, &u.emit(), output)?))
}

fn witness(netlist: &Path, a: &str, b: &str, rounds: usize, output: Option<&Path>, budget: &Budget) -> Result<Outcome> {
    let c = load_circuit(netlist)?;
    let (x, y) = (parse_word(a)?, parse_word(b)?);
    let mut r = Report::new(&format!("witness {} {a} {b} {rounds}", netlist.display()));
    match metastable_witness(&c, rounds, &x, &y, budget)? {
        Witness::Overlap => {
            r.kv("verdict", "outputs overlap");
            Ok(Outcome::fail(r.finish()))
        }
        Witness::Trace { input, trace } => {
            r.kv("verdict", "metastable output").kv("input", input);
            Ok(Outcome::pass(deliver(r, &trace.emit(), output)?))
        }
    }
}

fn params<const N: usize>(name: ComponentName, given: &[usize]) -> Result<[usize; N]> {
    given.try_into().map_err(|_| {
        let label = name.to_possible_value().expect("no skipped variants");
        Failure::Usage(format!(
            "{} takes {N} parameter(s), got {}",
            label.get_name(),
            given.len()
        ))
    })
}

fn component(
    name: ComponentName,
    given: &[usize],
    emit: Emit,
    output: Option<&Path>,
    budget: &Budget,
) -> Result<Outcome> {
    use ComponentName as N;
    let (c, spec): (Circuit, Option<(FunctionSpec, usize)>) = match name {
        N::Mux => {
            params::<0>(name, given)?;
            (components::build_mux(), Some((function::mux(), 1)))
        }
        N::Cmux => {
            params::<0>(name, given)?;
            (components::build_cmux_combinational(), Some((function::cmux(), 1)))
        }
        N::CmuxClocked => {
            params::<0>(name, given)?;
            (components::build_cmux_clocked(), Some((function::cmux(), 2)))
        }
        N::Fanout => {
            let [r] = params(name, given)?;
            (
                components::build_fanout_buffer(r)?,
                Some((function::masking_fanout(r), r)),
            )
        }
        N::Counter => {
            let [r] = params(name, given)?;
            (components::build_counter(r)?, None)
        }
        N::Selector => {
            let [r] = params(name, given)?;
            (components::build_selector(r)?, None)
        }
        N::Tc2brgc => {
            let [k] = params(name, given)?;
            (components::build_tc_to_brgc(k)?, None)
        }
        N::TwoSort => {
            let [k] = params(name, given)?;
            (components::build_two_sort(k, budget)?, None)
        }
        N::Sortnet => {
            let [n, k] = params(name, given)?;
            (components::build_sorting_network(n, k, budget)?.1, None)
        }
        N::Brgc2tc => {
            let [k] = params(name, given)?;
            (components::build_brgc_to_tc(k, budget)?, None)
        }
    };
    let label = name.to_possible_value().expect("no skipped variants");
    let echo: Vec<String> = std::iter::once(label.get_name().to_string())
        .chain(given.iter().map(usize::to_string))
        .collect();
    let mut r = Report::new(&format!("component {}", echo.join(" ")));
    r.kv("circuit", c.name())
        .kv("inputs", c.input_count())
        .kv("locals", c.local_count())
        .kv("outputs", c.output_count())
        .kv("gates", c.gates().len())
        .kv("depth", c.depth());
    let mut code = 0;
    if let Some((f, rounds)) = spec {
        let verdict = implements(&c, rounds, &f, budget)?;
        r.kv("rounds", rounds);
        match verdict {
            Verdict::Implements => r.kv("verdict", "implements"),
            Verdict::Counterexample { input, output } => {
                code = 1;
                r.kv("verdict", "counterexample")
                    .kv("input", input)
                    .kv("output", output)
            }
        };
    }
    let stdout = match emit {
        Emit::Netlist => deliver(r, &c.emit(), output)?,
        Emit::Report => {
            if let Some(path) = output {
                write(path, &r.0)?;
            }
            r.finish()
        }
    };
    Ok(Outcome { code, stdout })
}

fn pipeline(faults: usize, bits: usize, readings: &[String], budget: &Budget) -> Result<Outcome> {
    let words: Vec<TdcReading> = readings
        .iter()
        .map(|s| Ok(TdcReading::new(parse_word(s)?)?))
        .collect::<Result<_>>()?;
    let cs = ClockSync::build(words.len(), faults, bits, budget)?;
    let s = cs.select(&words)?;
    let tc = Code::tc(cs.reading_width());
    let mut r = Report::new(&format!(
        "pipeline --faults {faults} --bits {bits} {}",
        readings.join(" ")
    ));
    r.kv("nodes", cs.nodes).kv("faults", faults);
    for (label, w) in [("upper", &s.upper), ("lower", &s.lower)] {
        r.kv(label, w);
        r.kv(&format!("{label}.precision"), tc.precision(w, budget)?);
    }
    Ok(Outcome::pass(r.finish()))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let budget = Budget {
        max_states: cli.max_states,
        max_meta_bits: cli.max_meta_bits,
    };
    match &cli.command {
        Command::Sim {
            netlist,
            input,
            rounds,
            trace,
            contains,
        } => {
            let args = SimArgs {
                trace: trace.as_deref(),
                contains: contains.as_deref(),
            };
            sim(netlist, input, *rounds, args, &budget)
        }
        Command::Check { netlist, spec, rounds } => check(netlist, spec, *rounds, &budget),
        Command::Closure { table, output } => closure(table, output.as_deref()),
        Command::Synth { spec, output } => synth(spec, output.as_deref(), &budget),
        Command::Unroll {
            netlist,
            rounds,
            output,
        } => unroll_cmd(netlist, *rounds, output.as_deref()),
        Command::Witness {
            netlist,
            input,
            other,
            rounds,
            output,
        } => witness(netlist, input, other, *rounds, output.as_deref(), &budget),
        Command::Component {
            name,
            params,
            emit,
            output,
        } => component(*name, params, *emit, output.as_deref(), &budget),
        Command::Pipeline { faults, bits, readings } => pipeline(*faults, *bits, readings, &budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
