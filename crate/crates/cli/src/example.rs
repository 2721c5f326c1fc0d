use std::path::{Path, PathBuf};

use anyhow::bail;
use clap::Args;
use nearderiv::algebra::StructureTensor;
use nearderiv::constructions::classical::{build_classical, ClassicalAlgebra, Family};
use nearderiv::constructions::grading::{grading_operator, GradingSpec};
use nearderiv::constructions::nilpotent::{nilpotent_square, sl2_complete};
use nearderiv::constructions::splitting::splitting_operators;
use nearderiv::exactmath::{LinOp, RatMatrix};
use nearderiv::format::{print_algebra, print_operator, GradingMeta, Metadata};
use serde_json::{json, Value};

use crate::input::{parse_rats, InputError};
use crate::output::Report;

#[derive(Args, Debug)]
pub struct ExampleArgs {
    /// One of gl, sl, so, sp, identity, inner, grading, nilpotent-square, splitting.
    pub name: String,
    /// Family and size, e.g. `sl 3` (just the size for gl/sl/so/sp).
    pub params: Vec<String>,
    /// Jordan type of `e` for nilpotent-square.
    #[arg(long, value_delimiter = ',')]
    pub partition: Option<Vec<usize>>,
    /// Basis indices of the first subalgebra for splitting.
    #[arg(long = "h", value_delimiter = ',')]
    pub first: Option<Vec<usize>>,
    /// Basis indices of the second subalgebra for splitting.
    #[arg(long = "r", value_delimiter = ',')]
    pub second: Option<Vec<usize>>,
    /// Basis weights for grading.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<i64>>,
    /// Modulus of a cyclic grading; integer grading when absent.
    #[arg(long)]
    pub modulus: Option<u32>,
    /// Coordinates of `x` for inner (writes `ad x`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub element: Option<Vec<String>>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

fn family_and_size(params: &[String]) -> anyhow::Result<(Family, usize)> {
    let [family, n] = params else {
        bail!(InputError("expected a family and a size, e.g. `sl 3`".into()));
    };
    let family: Family = family.parse()?;
    let n = n
        .parse()
        .map_err(|_| InputError(format!("size `{n}` is not a positive integer")))?;
    Ok((family, n))
}

fn required<T: Clone>(value: &Option<T>, flag: &str, name: &str) -> anyhow::Result<T> {
    match value {
        Some(v) => Ok(v.clone()),
        None => bail!(InputError(format!("{name} needs --{flag}"))),
    }
}

struct Writer<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, contents: String) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path.display().to_string());
        Ok(())
    }

    fn algebra(&mut self, stem: &str, g: &ClassicalAlgebra, grading: Option<&GradingSpec>) -> anyhow::Result<()> {
        let meta = Metadata {
            family: Some(g.family.to_string()),
            grading: grading.map(GradingMeta::from_spec),
        };
        self.write(&format!("{stem}.json"), print_algebra(&g.tensor, Some(meta)))
    }

    fn operator(&mut self, name: &str, d: &LinOp) -> anyhow::Result<()> {
        self.write(name, print_operator(d))
    }
}

fn labelled(t: &StructureTensor, v: &[nearderiv::exactmath::Rat]) -> Value {
    let coords: Vec<String> = v.iter().map(nearderiv::exactmath::format_rat).collect();
    json!({"labels": t.labels(), "coords": coords})
}

pub fn run(args: &ExampleArgs) -> anyhow::Result<Report> {
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| InputError(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let mut w = Writer {
        dir: &args.out_dir,
        written: Vec::new(),
    };
    let name = args.name.as_str();
    let mut details = json!({});
    match name {
        "gl" | "sl" | "so" | "sp" => {
            let mut params = vec![name.to_string()];
            params.extend(args.params.iter().cloned());
            let (family, n) = family_and_size(&params)?;
            let g = build_classical(family, n)?;
            w.algebra(&format!("{family}{n}"), &g, None)?;
        }
        "identity" | "inner" => {
            let (family, n) = family_and_size(&args.params)?;
            let g = build_classical(family, n)?;
            let stem = format!("{family}{n}");
            w.algebra(&stem, &g, None)?;
            if name == "identity" {
                w.operator(&format!("{stem}-identity.json"), &RatMatrix::identity(g.tensor.dim()))?;
            } else {
                let x = parse_rats(&required(&args.element, "element", name)?, "element")?;
                if x.len() != g.tensor.dim() {
                    bail!(InputError(format!(
                        "element has {} coordinates, {stem} has dimension {}",
                        x.len(),
                        g.tensor.dim()
                    )));
                }
                w.operator(&format!("{stem}-ad.json"), &g.tensor.left_mult(&x)?)?;
            }
        }
        "grading" => {
            let (family, n) = family_and_size(&args.params)?;
            let g = build_classical(family, n)?;
            let weights = required(&args.weights, "weights", name)?;
            let spec = match args.modulus {
                Some(m) => GradingSpec::modular(weights, m)?,
                None => GradingSpec::integer(weights),
            };
            spec.validate(&g.tensor)?;
            let stem = format!("{family}{n}");
            w.algebra(&stem, &g, Some(&spec))?;
            w.operator(&format!("{stem}-grading.json"), &grading_operator(&spec))?;
        }
        "nilpotent-square" => {
            let (family, n) = family_and_size(&args.params)?;
            let partition = required(&args.partition, "partition", name)?;
            let (g, triple) = sl2_complete(family, n, &partition)?;
            let sq = nilpotent_square(&g.tensor, &triple.e)?;
            let stem = format!("{family}{n}");
            let tag = partition.iter().map(ToString::to_string).collect::<Vec<_>>().join("-");
            w.algebra(&stem, &g, None)?;
            w.operator(&format!("{stem}-nilsquare-{tag}.json"), &sq.operator)?;
            details = json!({
                "e": labelled(&g.tensor, &triple.e),
                "h": labelled(&g.tensor, &triple.h),
                "f": labelled(&g.tensor, &triple.f),
                "diagnostics": sq.diagnostics,
            });
            let mut text = serde_json::to_string_pretty(&details).expect("diagnostics serialize");
            text.push('\n');
            w.write(&format!("{stem}-nilsquare-{tag}-diagnostics.json"), text)?;
        }
        "splitting" => {
            let (family, n) = family_and_size(&args.params)?;
            let first = required(&args.first, "h", name)?;
            let second = required(&args.second, "r", name)?;
            let g = build_classical(family, n)?;
            let s = splitting_operators(&g.tensor, &first, &second)?;
            let stem = format!("{family}{n}");
            w.algebra(&stem, &g, None)?;
            w.operator(&format!("{stem}-split-h.json"), &s.onto_first)?;
            w.operator(&format!("{stem}-split-r.json"), &s.onto_second)?;
        }
        other => bail!(InputError(format!(
            "unknown example `{other}`; expected gl, sl, so, sp, identity, inner, grading, nilpotent-square or splitting"
        ))),
    }
    let mut body = json!({"written": w.written});
    if details != json!({}) {
        body["details"] = details;
    }
    Ok(Report::new(body, true))
}
