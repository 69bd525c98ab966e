//! One handler per verb; each returns the exit code after emitting its JSON result.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};
use subcouple::coupling::{
    amalgam_coupling, build_b, build_matroid_coupling, build_polymatroid_coupling, verify_coupling, CouplingSpec,
    RectangleWitness,
};
use subcouple::json::{self as formats, FunctionInput};
use subcouple::matroid::{base_vertex, helgason_expand, Matroid, ModularWeights, CERTIFY_CAP};
use subcouple::rational::{self, Rational};
use subcouple::setfn::{
    check_k_alternating, check_k_alternating_full, coverage_decompose, quotient, GroundSet, Partition, Property,
    PropertyViolation, SetFunction, SubsetMask,
};
use subcouple::sfm::{minimize_brute_with_cap, minimize_over_supersets, Algorithm, MinimizationResult};
use subcouple::tensor::{check_ingleton_with_cap, check_tensor, coverage_tensor, kronecker_tensor, IngletonMode};
use subcouple::universal::{build_universal_partition, verify_universal, UniversalViolation};
use subcouple::{Error, Verdict};

use crate::{CheckArgs, CheckProperty, Command, CoupleArgs, CoupleKind, MinimizeArgs, QuotientArgs, TensorArgs, TensorKind};

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn in_file<T>(path: &Path, result: subcouple::Result<T>) -> CliResult<T> {
    result.map_err(|e| format!("{}: {e}", path.display()))
}

fn load_function(path: &Path) -> CliResult<FunctionInput> {
    in_file(path, formats::parse_function(&read(path)?))
}

fn load_set_function(path: &Path) -> CliResult<SetFunction> {
    in_file(path, load_function(path)?.to_set_function())
}

fn load_matroid(path: &Path) -> CliResult<Matroid> {
    in_file(path, load_function(path)?.to_matroid())
}

fn lib<T>(result: subcouple::Result<T>) -> CliResult<T> {
    result.map_err(|e| e.to_string())
}

/// Parses comma-separated labels into a mask. Commas inside parentheses belong to the
/// label, so product labels such as `(1,2)` can be listed.
fn parse_subset(ground: &GroundSet, text: &str) -> CliResult<SubsetMask> {
    let mut labels = Vec::new();
    let (mut depth, mut start) = (0usize, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                labels.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    labels.push(&text[start..]);
    let labels: Vec<&str> = labels.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect();
    lib(ground.mask_of(&labels))
}

fn labels(ground: &GroundSet, mask: SubsetMask) -> Value {
    json!(formats::subset_labels(ground, mask))
}

fn emit(output: &Option<PathBuf>, value: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    match output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(format!("stdout: {e}")),
            _ => Ok(()),
        },
    }
}

/// Emits a verdict document and maps it to exit code 0 or 1.
fn verdict(output: &Option<PathBuf>, property: &str, witness: Option<Value>) -> CliResult<ExitCode> {
    let holds = witness.is_none();
    emit(output, &json!({ "property": property, "holds": holds, "witness": witness }))?;
    eprintln!("{property}: {}", if holds { "holds" } else { "fails" });
    Ok(ExitCode::from(if holds { 0 } else { 1 }))
}

fn success(output: &Option<PathBuf>, value: &Value, summary: String) -> CliResult<ExitCode> {
    emit(output, value)?;
    eprintln!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn property_witness(ground: &GroundSet, v: &PropertyViolation) -> Value {
    json!({
        "axiom": v.axiom,
        "sets": v.sets.iter().map(|&s| labels(ground, s)).collect::<Vec<_>>(),
    })
}

fn rectangle_witness(left: &GroundSet, right: &GroundSet, w: &RectangleWitness) -> Value {
    json!({
        "left": labels(left, w.left),
        "right": labels(right, w.right),
        "expected": rational::format(&w.expected),
        "actual": rational::format(&w.actual),
    })
}

fn not_coverage(ground: &GroundSet, subset: SubsetMask, coefficient: &Rational) -> Value {
    json!({ "subset": labels(ground, subset), "coefficient": rational::format(coefficient) })
}

pub fn run(command: &Command, unsafe_cap: Option<usize>) -> CliResult<ExitCode> {
    match command {
        Command::Check(args) => check(args, unsafe_cap),
        Command::Couple(args) => couple(args),
        Command::Tensor(args) => tensor(args),
        Command::Decompose(args) => decompose(&args.input, &args.output),
        Command::Quotient(args) => quotient_cmd(args),
        Command::Universal(args) => universal(&args.input, &args.output),
        Command::Minimize(args) => minimize(args, unsafe_cap),
        Command::Expand(args) => expand(&args.input, &args.output),
        Command::Certify(args) => certify(&args.input, &args.output, unsafe_cap),
    }
}

fn check(args: &CheckArgs, unsafe_cap: Option<usize>) -> CliResult<ExitCode> {
    let needs_three = matches!(args.property, CheckProperty::Coupling | CheckProperty::Tensor);
    let expected = if needs_three { 3 } else { 1 };
    if args.inputs.len() != expected {
        return Err(format!("this property takes {expected} input file(s), got {}", args.inputs.len()));
    }
    let input = &args.inputs[0];
    let out = &args.output;
    let simple = |property: Property, name: &str| -> CliResult<ExitCode> {
        let f = load_set_function(input)?;
        let witness = f.check(property).witness().map(|v| property_witness(f.ground(), v));
        verdict(out, name, witness)
    };
    match args.property {
        CheckProperty::Normalized => simple(Property::Normalized, "normalized"),
        CheckProperty::Increasing => simple(Property::Increasing, "increasing"),
        CheckProperty::Decreasing => simple(Property::Decreasing, "decreasing"),
        CheckProperty::Submodular => simple(Property::Submodular, "submodular"),
        CheckProperty::Supermodular => simple(Property::Supermodular, "supermodular"),
        CheckProperty::Modular => simple(Property::Modular, "modular"),
        CheckProperty::Polymatroid => simple(Property::Polymatroid, "polymatroid"),
        CheckProperty::Matroid => simple(Property::MatroidRank, "matroid"),
        CheckProperty::KPolymatroid => {
            let k = args.k.as_deref().ok_or("--k is required for k-polymatroid")?;
            simple(Property::KPolymatroid(lib(rational::parse(k))?), "k-polymatroid")
        }
        CheckProperty::KAlternating => {
            let k: usize = args
                .k
                .as_deref()
                .ok_or("--k is required for k-alternating")?
                .parse()
                .map_err(|_| "--k must be a positive integer for k-alternating".to_string())?;
            let f = load_set_function(input)?;
            let result = if args.full {
                check_k_alternating_full(&f, k)
            } else {
                check_k_alternating(&f, k)
            };
            let witness = lib(result)?.witness().map(|w| {
                json!({
                    "sets": w.sets.iter().map(|&s| labels(f.ground(), s)).collect::<Vec<_>>(),
                    "alternating_sum": rational::format(&w.alternating_sum),
                })
            });
            verdict(out, "k-alternating", witness)
        }
        CheckProperty::Coverage => {
            let f = load_set_function(input)?;
            match coverage_decompose(&f) {
                Ok(_) => verdict(out, "coverage", None),
                Err(Error::NotCoverage { subset, coefficient }) => {
                    verdict(out, "coverage", Some(not_coverage(f.ground(), subset, &coefficient)))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        CheckProperty::Ingleton => {
            let f = load_set_function(input)?;
            let mode = if args.disjoint_only {
                IngletonMode::DisjointOnly
            } else {
                IngletonMode::All
            };
            let report = lib(check_ingleton_with_cap(&f, mode, unsafe_cap.unwrap_or(mode.default_cap())))?;
            let g = f.ground();
            let witness = report.witness.map(|w| {
                json!({
                    "mode": mode.to_string(),
                    "A": labels(g, w.a),
                    "B": labels(g, w.b),
                    "C": labels(g, w.c),
                    "D": labels(g, w.d),
                    "lhs": rational::format(&w.lhs),
                    "rhs": rational::format(&w.rhs),
                })
            });
            verdict(out, "ingleton", witness)
        }
        CheckProperty::Coupling | CheckProperty::Tensor => {
            let phi = load_set_function(&args.inputs[0])?;
            let f1 = load_set_function(&args.inputs[1])?;
            let f2 = load_set_function(&args.inputs[2])?;
            let (g1, g2) = (f1.ground(), f2.ground());
            if args.property == CheckProperty::Coupling {
                let v = lib(verify_coupling(&phi, &f1, &f2))?;
                verdict(out, "coupling", v.witness().map(|w| rectangle_witness(g1, g2, w)))
            } else {
                let v = lib(check_tensor(&phi, &f1, &f2))?;
                let render = |c: &Verdict<RectangleWitness>| c.witness().map(|w| rectangle_witness(g1, g2, w));
                let witness = (!v.is_tensor).then(|| {
                    json!({
                        "condition_i": render(&v.condition_i),
                        "condition_ii": render(&v.condition_ii),
                        "condition_iii": render(&v.condition_iii),
                    })
                });
                verdict(out, "tensor", witness)
            }
        }
        CheckProperty::Universal => {
            let w = in_file(input, formats::parse_universal_witness(&read(input)?))?;
            let witness = lib(verify_universal(&w))?.witness().map(|v| match v {
                UniversalViolation::Overlap { first, second } => json!({
                    "kind": "overlap",
                    "classes": [w.psi.ground().label(*first), w.psi.ground().label(*second)],
                }),
                UniversalViolation::Mismatch { subset, expected, actual } => json!({
                    "kind": "mismatch",
                    "subset": labels(w.psi.ground(), *subset),
                    "expected": rational::format(expected),
                    "actual": rational::format(actual),
                }),
            });
            verdict(out, "universal", witness)
        }
    }
}

fn load_weights(path: &Option<PathBuf>, phi: &SetFunction) -> CliResult<Option<ModularWeights>> {
    path.as_ref()
        .map(|p| in_file(p, formats::parse_weights(&read(p)?, phi.ground())))
        .transpose()
}

fn couple(args: &CoupleArgs) -> CliResult<ExitCode> {
    match args.kind {
        CoupleKind::Submodular | CoupleKind::Polymatroid => {
            let f1 = load_set_function(&args.f1)?;
            let f2 = load_set_function(&args.f2)?;
            let mu1 = match load_weights(&args.mu1, &f1)? {
                Some(w) => w,
                None => lib(base_vertex(&f1, None))?,
            };
            let mu2 = match load_weights(&args.mu2, &f2)? {
                Some(w) => w,
                None => lib(base_vertex(&f2, None))?,
            };
            let spec = lib(CouplingSpec::new(f1, f2, mu1, mu2))?;
            let phi = if args.kind == CoupleKind::Submodular {
                lib(build_b(&spec))?
            } else {
                lib(build_polymatroid_coupling(&spec))?
            };
            let summary = format!("coupling on {} elements", phi.n());
            success(&args.output, &formats::set_function_to_value(&phi), summary)
        }
        CoupleKind::Matroid | CoupleKind::Amalgam => {
            let m1 = load_matroid(&args.f1)?;
            let m2 = load_matroid(&args.f2)?;
            let basis = |m: &Matroid, given: &Option<String>| -> CliResult<SubsetMask> {
                match given {
                    Some(text) => parse_subset(m.ground(), text),
                    None => Ok(m.find_basis()),
                }
            };
            let (b1, b2) = (basis(&m1, &args.basis1)?, basis(&m2, &args.basis2)?);
            let m = if args.kind == CoupleKind::Matroid {
                lib(build_matroid_coupling(&m1, &m2, b1, b2))?
            } else {
                lib(amalgam_coupling(&m1, &m2, b1, b2))?
            };
            let value = lib(formats::matroid_to_value(&m))?;
            success(&args.output, &value, format!("matroid coupling of rank {}", m.full_rank()))
        }
    }
}

fn tensor(args: &TensorArgs) -> CliResult<ExitCode> {
    match args.kind {
        TensorKind::Coverage => {
            let f1 = load_set_function(&args.f1)?;
            let f2 = load_set_function(&args.f2)?;
            let t = lib(coverage_tensor(&f1, &f2))?;
            success(&args.output, &formats::set_function_to_value(&t), format!("tensor product on {} elements", t.n()))
        }
        TensorKind::Kronecker => {
            let m1 = load_matroid(&args.f1)?;
            let m2 = load_matroid(&args.f2)?;
            let m = lib(kronecker_tensor(&m1, &m2))?;
            let value = lib(formats::matroid_to_value(&m))?;
            success(&args.output, &value, format!("Kronecker tensor of rank {}", m.full_rank()))
        }
    }
}

fn decompose(input: &Path, output: &Option<PathBuf>) -> CliResult<ExitCode> {
    let f = load_set_function(input)?;
    match coverage_decompose(&f) {
        Ok(d) => {
            let terms: Vec<Value> = d
                .coefficients()
                .iter()
                .map(|(&a, c)| json!({ "set": labels(f.ground(), a), "coefficient": rational::format(c) }))
                .collect();
            let value = json!({ "ground_set": f.ground().labels(), "terms": terms });
            success(output, &value, format!("coverage decomposition, nonzero terms: {}", terms.len()))
        }
        Err(Error::NotCoverage { subset, coefficient }) => {
            verdict(output, "coverage", Some(not_coverage(f.ground(), subset, &coefficient)))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn quotient_cmd(args: &QuotientArgs) -> CliResult<ExitCode> {
    let f = load_set_function(&args.input)?;
    let blocks: Vec<&str> = args.classes.split(';').collect();
    let masks = blocks
        .iter()
        .map(|b| parse_subset(f.ground(), b))
        .collect::<CliResult<Vec<_>>>()?;
    let classes = lib(GroundSet::indexed(masks.len()))?;
    let partition = lib(Partition::from_masks(f.ground().clone(), &masks, classes))?;
    let q = lib(quotient(&f, &partition))?;
    success(&args.output, &formats::set_function_to_value(&q), format!("quotient on {} classes", q.n()))
}

fn universal(input: &Path, output: &Option<PathBuf>) -> CliResult<ExitCode> {
    let psi = load_set_function(input)?;
    let w = lib(build_universal_partition(&psi))?;
    success(output, &formats::universal_witness_to_value(&w), format!("{} classes", w.classes.len()))
}

fn minimize(args: &MinimizeArgs, unsafe_cap: Option<usize>) -> CliResult<ExitCode> {
    let f = load_set_function(&args.input)?;
    let algorithm: Algorithm = lib(args.algorithm.parse())?;
    let result: MinimizationResult = match &args.superset_of {
        Some(text) => {
            let z = parse_subset(f.ground(), text)?;
            lib(minimize_over_supersets(&f, z, algorithm))?
        }
        None if algorithm == Algorithm::Brute => {
            lib(minimize_brute_with_cap(&f, unsafe_cap.unwrap_or(subcouple::setfn::DENSE_CAP)))?
        }
        None => lib(subcouple::sfm::minimize(&f, algorithm))?,
    };
    let value = json!({
        "minimizer": labels(f.ground(), result.minimizer),
        "min_value": rational::format(&result.min_value),
        "algorithm": result.algorithm.to_string(),
        "iterations": result.iterations,
    });
    success(&args.output, &value, format!("minimum {}", rational::format(&result.min_value)))
}

fn expand(input: &Path, output: &Option<PathBuf>) -> CliResult<ExitCode> {
    let f = load_set_function(input)?;
    let e = lib(helgason_expand(&f))?;
    let theta: Vec<&str> = e.theta.iter().map(|&s| f.ground().label(s)).collect();
    let value = json!({ "matroid": lib(formats::matroid_to_value(&e.matroid))?, "theta": theta });
    success(output, &value, format!("matroid on {} elements", e.matroid.n()))
}

fn certify(input: &Path, output: &Option<PathBuf>, unsafe_cap: Option<usize>) -> CliResult<ExitCode> {
    let m = load_matroid(input)?;
    let v = lib(m.certify_with_cap(unsafe_cap.unwrap_or(CERTIFY_CAP)))?;
    verdict(output, "matroid", v.witness().map(|w| property_witness(m.ground(), w)))
}
