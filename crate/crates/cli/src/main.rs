use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pivext_cli::{render, solve, solve_batch, CliError, Format};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "pivext", version, about = "Pivotal structures on graded extensions of pointed fusion categories")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_parser = ["json", "text"])]
    format: Option<String>,
    /// Look for coboundary witnesses valued in μ_N.
    #[arg(long)]
    level: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a problem file (`-` for stdin).
    Run {
        file: String,
        /// The file holds an array of problems; print an array of results.
        #[arg(long)]
        batch: bool,
        /// Override the file's output format.
        #[arg(long, value_parser = ["json", "text"])]
        format: Option<String>,
    },
    /// Obstructions to extending a character of a normal abelian subgroup.
    ExtendCharacter {
        #[arg(long)]
        group: String,
        /// center, commutator, whole, trivial, or comma-separated generator labels.
        #[arg(long)]
        subgroup: String,
        /// Values on the subgroup's generators, e.g. `1/4` or `1/2,0`.
        #[arg(long)]
        character: String,
        #[command(flatten)]
        common: Common,
    },
    /// H^n(G, M) for kx, mu:N, conj-character or inv-center coefficients.
    Cohomology {
        #[arg(long)]
        group: String,
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value = "kx")]
        coefficients: String,
        /// Normal abelian subgroup for module coefficients.
        #[arg(long)]
        subgroup: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Pivotal structures on a Tambara-Yamagami category.
    Ty {
        /// Cyclic group order.
        #[arg(long, conflicts_with = "group")]
        order: Option<u64>,
        #[arg(long)]
        group: Option<String>,
        /// `standard`, rows such as `1/3,0;0,1/3`, or a JSON matrix, on the invariant-factor basis.
        #[arg(long, default_value = "standard")]
        bichar: String,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        tau: String,
        /// Values of φ on the generators.
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Stabilizer of Z_φ in O(A ⊕ Â, q).
    Picard {
        #[arg(long)]
        group: String,
        #[arg(long)]
        phi: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Long exact sequence orders for π₁ of the pivotal Brauer-Picard space.
    Les {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        /// File with a 3-cocycle on the carrier, as {"degree": 3, "values": {...}}.
        #[arg(long)]
        alpha: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Pivotalizability of the module category over G/H.
    ModulePivotal {
        #[arg(long)]
        group: String,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        common: Common,
    },
}

fn read_source(path: &str) -> Result<String, CliError> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn parse_json(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::schema(what, format!("valid JSON ({e})")))
}

fn problem(command: &str, payload: Map<String, Value>, common: &Common) -> Value {
    let mut options = Map::new();
    if let Some(f) = &common.format {
        options.insert("format".into(), json!(f));
    }
    if let Some(l) = common.level {
        options.insert("level".into(), json!(l));
    }
    json!({"command": command, "payload": payload, "options": options})
}

fn insert_opt(m: &mut Map<String, Value>, key: &str, v: &Option<String>) {
    if let Some(v) = v {
        m.insert(key.into(), json!(v));
    }
}

fn build(cmd: Cmd) -> Result<(Value, bool, Option<String>), CliError> {
    let mut m = Map::new();
    let v = match cmd {
        Cmd::Run { file, batch, format } => {
            let text = read_source(&file)?;
            return Ok((parse_json(&text, "$")?, batch, format));
        }
        Cmd::ExtendCharacter {
            group,
            subgroup,
            character,
            common,
        } => {
            m.insert("group".into(), json!(group));
            m.insert("subgroup".into(), json!(subgroup));
            m.insert("character".into(), json!(character));
            problem("extend-character", m, &common)
        }
        Cmd::Cohomology {
            group,
            degree,
            coefficients,
            subgroup,
            common,
        } => {
            m.insert("group".into(), json!(group));
            m.insert("degree".into(), json!(degree));
            m.insert("coefficients".into(), json!(coefficients));
            insert_opt(&mut m, "subgroup", &subgroup);
            problem("cohomology", m, &common)
        }
        Cmd::Ty {
            order,
            group,
            bichar,
            tau,
            phi,
            common,
        } => {
            if let Some(n) = order {
                m.insert("order".into(), json!(n));
            }
            insert_opt(&mut m, "group", &group);
            let bichar = if bichar == "standard" {
                json!(bichar)
            } else if bichar.trim_start().starts_with('[') {
                parse_json(&bichar, "--bichar")?
            } else {
                json!(bichar.split(';').map(str::trim).collect::<Vec<_>>())
            };
            m.insert("bichar".into(), bichar);
            m.insert("tau".into(), json!(tau));
            insert_opt(&mut m, "phi", &phi);
            problem("ty", m, &common)
        }
        Cmd::Picard { group, phi, common } => {
            m.insert("group".into(), json!(group));
            insert_opt(&mut m, "phi", &phi);
            problem("picard", m, &common)
        }
        Cmd::Les {
            group,
            subgroup,
            alpha,
            common,
        } => {
            m.insert("group".into(), json!(group));
            m.insert("subgroup".into(), json!(subgroup));
            if let Some(path) = alpha {
                m.insert("alpha".into(), parse_json(&read_source(&path)?, "--alpha")?);
            }
            problem("les", m, &common)
        }
        Cmd::ModulePivotal {
            group,
            phi,
            subgroup,
            common,
        } => {
            m.insert("group".into(), json!(group));
            insert_opt(&mut m, "phi", &phi);
            m.insert("subgroup".into(), json!(subgroup));
            problem("module-pivotal", m, &common)
        }
    };
    Ok((v, false, None))
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (input, batch, format) = match build(cli.command) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    if batch {
        let Value::Array(items) = &input else {
            return fail(&CliError::schema("$", "an array of problems"));
        };
        let (out, code) = solve_batch(items);
        let format = format.and_then(|f| f.parse().ok()).unwrap_or(Format::Json);
        println!("{}", render(&out, format));
        return ExitCode::from(code as u8);
    }
    match solve(&input) {
        Ok((p, out)) => {
            let format = format.and_then(|f| f.parse().ok()).unwrap_or(p.options.format);
            println!("{}", render(&out, format));
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
