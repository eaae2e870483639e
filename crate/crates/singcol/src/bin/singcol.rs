use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use singcol::catalog::{normal_form, TypeName};
use singcol::collision::{collide, CollisionData};
use singcol::flatlimit::{limit_for, verify_collision, Setup};
use singcol::invariants::InvariantRecord;
use singcol::newton::{nnd_check, parse_diagram, NewtonDiagram, Point};
use singcol::tables::{self, Ranges, Which};
use singcol::{render, Error, Polynomial, Result};

#[derive(Parser)]
#[command(
    name = "singcol",
    version,
    about = "Collisions of plane curve singularities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Type name, e.g. A3, D4, J2_0, omp(4), sqh(3,4), cuspfree(2,1)
    #[arg(long = "type")]
    ty: Option<String>,
    /// Polynomial literal, e.g. "y^2*x + x^5"
    #[arg(long)]
    poly: Option<String>,
    /// Diagram vertices, e.g. "[[0,3],[2,2],[6,0]]"
    #[arg(long)]
    diagram: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariant record of a type, polynomial or Newton diagram
    Invariants {
        #[command(flatten)]
        input: Input,
    },
    /// Collision results for S_x + S_y
    Collide {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Comma list from l=lx, l!=lx, l=ly, lx=ly
        #[arg(long, default_value = "l!=lx")]
        data: String,
    },
    /// Compute the flat limit and check it against the predicted collision
    Verify {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "l!=lx")]
        data: String,
        #[arg(long)]
        jet_degree: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the limit system as JSON
        #[arg(long, value_name = "FILE")]
        emit_limit_system: Option<PathBuf>,
    },
    /// Recompute one of the numerical tables
    Tables {
        /// omp-omp, cusp-omp, cuspfree-omp, ade or dk
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 4)]
        pmax: u32,
        #[arg(long)]
        qmax: Option<u32>,
        #[arg(long)]
        rmax: Option<u32>,
        /// Run the flat-limit lab on every cell
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON lines instead of a text table
        #[arg(long)]
        json: bool,
    },
    /// Draw a Newton diagram
    Diagram {
        #[command(flatten)]
        input: Input,
        /// Also write an SVG picture
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Print the diagram as JSON instead of ASCII
        #[arg(long)]
        json: bool,
    },
}

fn parse_type(s: &str) -> Result<TypeName> {
    s.parse()
}

/// Diagram, support points and the polynomial when one was given.
fn resolve(input: &Input) -> Result<(NewtonDiagram, Vec<Point>, Option<Polynomial>)> {
    if let Some(t) = &input.ty {
        let nf = normal_form(&parse_type(t)?)?;
        let support = nf.poly.support().map(|m| (m.x(), m.y())).collect();
        return Ok((nf.diagram, support, Some(nf.poly)));
    }
    if let Some(p) = &input.poly {
        let f: Polynomial = p.parse()?;
        let d = NewtonDiagram::of_polynomial(&f)?;
        let support = f.support().map(|m| (m.x(), m.y())).collect();
        return Ok((d, support, Some(f)));
    }
    let d = parse_diagram(input.diagram.as_deref().unwrap_or_default())?;
    Ok((d, Vec::new(), None))
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let s = serde_json::to_string(v).map_err(|e| Error::Internal(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn invariants(input: &Input) -> Result<()> {
    if let Some(t) = &input.ty {
        let nf = normal_form(&parse_type(t)?)?;
        return print_json(&InvariantRecord::of_diagram(&nf.diagram)?);
    }
    if let Some(p) = &input.poly {
        let f: Polynomial = p.parse()?;
        let d = NewtonDiagram::of_polynomial(&f)?;
        let nnd = nnd_check(&f, &d);
        let rec = if nnd {
            InvariantRecord::of_polynomial(&f)?
        } else {
            InvariantRecord::of_diagram(&d)?
        };
        print_json(&rec)?;
        if !nnd {
            eprintln!("note: Newton-degenerate, the record is the one of the diagram");
        }
        return print_json(&json!({ "diagram": d, "nnd": nnd }));
    }
    let (d, _, _) = resolve(input)?;
    print_json(&InvariantRecord::of_diagram(&d)?)
}

fn run_collide(x: &str, y: &str, data: &str) -> Result<()> {
    let (x, y, data) = (parse_type(x)?, parse_type(y)?, CollisionData::parse(data)?);
    for res in collide(&x, &y, &data)? {
        print_json(&res)?;
    }
    Ok(())
}

fn run_verify(
    x: &str,
    y: &str,
    data: &str,
    n: Option<u32>,
    seed: u64,
    emit: Option<&PathBuf>,
) -> Result<bool> {
    let (x, y, data) = (parse_type(x)?, parse_type(y)?, CollisionData::parse(data)?);
    let preds = collide(&x, &y, &data)?;
    let setup = Setup::new(x, y, data);
    if let Some(path) = emit {
        let (_, lim) = limit_for(&setup, n)?;
        let s = serde_json::to_string_pretty(&lim.to_json())
            .map_err(|e| Error::Internal(e.to_string()))?;
        write_file(path, &s)?;
    }
    let mut ok = true;
    for pred in &preds {
        let rep = verify_collision(pred, &setup, n, seed)?;
        eprintln!("seed {} jet degree {}", rep.seed, rep.jet_degree);
        ok &= rep.pass();
        print_json(&rep)?;
    }
    Ok(ok)
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(s) = std::env::var("SINGCOL_THREADS") {
        let n: usize = s.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("SINGCOL_THREADS={s:?} is not a number"),
        })?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| Error::Internal(e.to_string()))
}

fn run_tables(which: &str, ranges: Ranges, verify: bool, seed: u64, as_json: bool) -> Result<bool> {
    let which: Which = which.parse()?;
    let cells = tables::cells(which, &ranges)?;
    if verify {
        eprintln!("seed {seed}, jet degree per cell in the report");
    }
    let rows = pool()?.install(|| tables::rows(cells, verify.then_some(seed)));
    if as_json {
        for r in &rows {
            print_json(r)?;
        }
    } else {
        print!("{}", tables::render(&rows));
    }
    Ok(tables::all_verified(&rows))
}

fn run_diagram(input: &Input, svg: Option<&PathBuf>, as_json: bool) -> Result<()> {
    let (d, support, _) = resolve(input)?;
    if let Some(path) = svg {
        write_file(path, &render::svg(&d, &support))?;
    }
    if as_json {
        print_json(&d)
    } else {
        print!("{}", render::ascii(&d, &support));
        Ok(())
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Invariants { input } => invariants(&input).map(|_| true),
        Cmd::Collide { x, y, data } => run_collide(&x, &y, &data).map(|_| true),
        Cmd::Verify {
            x,
            y,
            data,
            jet_degree,
            seed,
            emit_limit_system,
        } => run_verify(&x, &y, &data, jet_degree, seed, emit_limit_system.as_ref()),
        Cmd::Tables {
            which,
            pmax,
            qmax,
            rmax,
            verify,
            seed,
            json,
        } => run_tables(&which, Ranges::new(pmax, qmax, rmax)?, verify, seed, json),
        Cmd::Diagram { input, svg, json } => run_diagram(&input, svg.as_ref(), json).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::Arity { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
