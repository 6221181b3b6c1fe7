use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use tight_design::construct::{build_design, build_design_with, design_sources, read_design, write_design, PairHistogram, WeightedPointSet};
use tight_design::lattice::io::write_point_set;
use tight_design::lattice::{alternate_anchors, canonical_anchors, shell_enumerators, LatticeVector, ShellEnumerator};
use tight_design::report::VerificationReport;
use tight_design::unique::write_candidates;
use tight_design::verify::{
    compute_tensor, verify_anchor_independence, verify_coherent, verify_construction, verify_design, verify_sphere,
    verify_unique, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "tight-design", about = "Build and verify the tight 6-design on 2300 points in R^22")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Anchor pair: "canonical", "alt", or two comma-separated lists of 24 integers in the
    /// √8-scaled frame separated by ';'.
    #[arg(long, global = true, default_value = "canonical")]
    anchors: String,
    /// Output directory for point sets and reports.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for the floating-point oracle.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Also run the seeded floating-point polynomial oracle.
    #[arg(long, global = true)]
    float_oracle: bool,
    /// Shell enumeration strategy: "fincke-pohst" or "shape-filter".
    #[arg(long, global = true, default_value = "fincke-pohst")]
    enumerator: String,
    /// Verify a design file instead of building from the anchors.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Enumerate the shells and write the design and shell files.
    Build,
    /// Cardinality, parameters, strength, tightness and oracles.
    VerifyDesign,
    /// Intersection numbers of the coherent configuration.
    VerifyCoherent,
    /// Exhaustive search for the outer layer over the inner layer.
    VerifyUnique,
    /// The antipodal set Y and the spherical tight 7-design Z.
    Verify7design,
    /// Rebuild with the alternate anchors and compare.
    VerifyAnchors,
    /// Every stage.
    All,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn parse_anchors(s: &str) -> Result<(LatticeVector, LatticeVector), Failure> {
    match s {
        "canonical" => return Ok(canonical_anchors()),
        "alt" => return Ok(alternate_anchors()),
        _ => {}
    }
    let parts: Vec<&str> = s.split(';').collect();
    let [a, b] = parts.as_slice() else {
        return Err(Failure(format!("anchors must be 'canonical', 'alt' or 'A;B', got {s:?}")));
    };
    let vec = |t: &str| -> Result<LatticeVector, Failure> {
        let v = t.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>()?;
        Ok(LatticeVector::from_slice(&v)?)
    };
    Ok((vec(a)?, vec(b)?))
}

struct Run {
    cli: Cli,
    anchors: (LatticeVector, LatticeVector),
    enumerator: Box<dyn ShellEnumerator>,
    timings: serde_json::Map<String, serde_json::Value>,
    all_pass: bool,
}

impl Run {
    fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(name.to_string(), serde_json::json!(start.elapsed().as_millis() as u64));
        out
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), Failure> {
        let path = self.cli.out.join(name);
        fs::write(&path, contents).map_err(|e| Failure(format!("writing {}: {e}", path.display())))
    }

    fn emit(&mut self, report: &VerificationReport) -> Result<(), Failure> {
        self.write(&format!("report-{}.json", report.stage), &report.to_json())?;
        let summary = report.summary();
        self.write(&format!("report-{}.txt", report.stage), &summary)?;
        print!("{summary}");
        if let Some(c) = report.first_failure() {
            println!("first failed claim: {}", c.claim);
        }
        self.all_pass &= report.passes();
        Ok(())
    }

    fn design(&mut self) -> Result<WeightedPointSet, Failure> {
        match self.cli.input.clone() {
            Some(p) => {
                let text = fs::read_to_string(&p).map_err(|e| Failure(format!("reading {}: {e}", p.display())))?;
                Ok(read_design(&text)?)
            }
            None => {
                let (a, b) = self.anchors;
                let design = build_design_with(&*self.enumerator, &a, &b);
                Ok(self.timed("build", || design)?)
            }
        }
    }

    fn histogram(&mut self, design: &WeightedPointSet) -> Result<PairHistogram, Failure> {
        let frame = design.frame()?;
        Ok(self.timed("pair-histogram", || frame.pair_histogram()))
    }

    fn build(&mut self) -> Result<WeightedPointSet, Failure> {
        let (a, b) = self.anchors;
        let start = Instant::now();
        let src = design_sources(&*self.enumerator, &a, &b)?;
        self.timings.insert("shells".into(), serde_json::json!(start.elapsed().as_millis() as u64));
        self.write("inner-shell.txt", &write_point_set(&6.into(), &src.inner))?;
        self.write("outer-shell.txt", &write_point_set(&4.into(), &src.outer))?;
        let design = build_design_with(&*self.enumerator, &a, &b)?;
        self.write("design.txt", &write_design(&design))?;
        let start = Instant::now();
        let report = verify_construction(&*self.enumerator, &a, &b, &design);
        self.timings.insert("construction".into(), serde_json::json!(start.elapsed().as_millis() as u64));
        self.emit(&report)?;
        Ok(design)
    }

    fn execute(&mut self) -> Result<(), Failure> {
        let opts = VerifyOptions { seed: self.cli.seed, float_oracle: self.cli.float_oracle };
        let (a, b) = self.anchors;
        let command = self.cli.command;
        let design = if matches!(command, Command::Build | Command::All) && self.cli.input.is_none() {
            self.build()?
        } else {
            self.design()?
        };
        if command == Command::Build {
            return Ok(());
        }
        let needs_hist = matches!(command, Command::VerifyDesign | Command::Verify7design | Command::VerifyAnchors | Command::All);
        let hist = if needs_hist { Some(self.histogram(&design)?) } else { None };
        if matches!(command, Command::VerifyDesign | Command::All) {
            let r = self.timed("design", || verify_design(&design, hist.as_ref().unwrap(), &opts));
            self.emit(&r)?;
        }
        let mut tensor = None;
        if matches!(command, Command::VerifyCoherent | Command::All) {
            let (r, t) = self.timed("coherent", || verify_coherent(&design));
            if let Ok(t) = &t {
                self.write("tensor.txt", &t.to_text())?;
            }
            tensor = Some(t);
            self.emit(&r)?;
        }
        if matches!(command, Command::VerifyUnique | Command::All) {
            let (r, c) = self.timed("unique", || verify_unique(&design, &a, &b));
            if let Some(c) = c {
                self.write("candidates.txt", &write_candidates(&c.points))?;
            }
            self.emit(&r)?;
        }
        if matches!(command, Command::Verify7design | Command::All) {
            let r = self.timed("sphere", || verify_sphere(&design, hist.as_ref().unwrap(), &a, &b));
            self.emit(&r)?;
        }
        if matches!(command, Command::VerifyAnchors | Command::All) {
            let first_tensor = match tensor {
                Some(t) => t,
                None => self.timed("coherent", || compute_tensor(&design)),
            };
            let (c, d) = alternate_anchors();
            let (c, d) = if (c, d) == self.anchors { canonical_anchors() } else { (c, d) };
            let other = self.timed("alternate-build", || build_design(&c, &d))?;
            let other_hist = self.histogram(&other)?;
            let other_tensor = self.timed("alternate-coherent", || compute_tensor(&other));
            let r = verify_anchor_independence((hist.as_ref().unwrap(), &first_tensor), (&other_hist, &other_tensor));
            self.emit(&r)?;
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let anchors = match parse_anchors(&cli.anchors) {
        Ok(a) => a,
        Err(Failure(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Err(e) = fs::create_dir_all(&cli.out) {
        eprintln!("error: creating {}: {e}", cli.out.display());
        return ExitCode::from(2);
    }
    let enumerator = match shell_enumerators().create(&cli.enumerator) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut run = Run { cli, anchors, enumerator, timings: serde_json::Map::new(), all_pass: true };
    let result = run.execute();
    let timings = serde_json::to_string_pretty(&run.timings).unwrap_or_default() + "\n";
    let timing_file = Path::new(&run.cli.out).join("timings.json");
    if let Err(e) = fs::write(&timing_file, timings) {
        eprintln!("error: writing {}: {e}", timing_file.display());
        return ExitCode::from(2);
    }
    match result {
        Err(Failure(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(()) if run.all_pass => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
    }
}
