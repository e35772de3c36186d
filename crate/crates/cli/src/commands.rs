use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use isingform::codes::{dual as dual_code, format_code_file, goodform_conditions, is_type_ii};
use isingform::intertwining::{
    build_correlation, check_well_defined, even_support_decomposition, framed_criterion, parse_lowest_table, verdict_of,
};
use isingform::lattice::{compare, contains, graded_dual, saturate_generated_form, ModuleForm};
use isingform::rational::{format_rational, parse_rational, Rational, RationalJson};
use isingform::report::{lattice_reports, lattice_tsv, rational_matrix, CorrelationReport, LatticeReport};
use isingform::tensor::{weight1_count_e8, TensorModule, TensorVector};
use isingform::virasoro::{irreducible_basis, minimal_model_data, CentralParams};
use isingform::{BinaryCode, CodeSource, HVector, TripleSpec, Word};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::{CodesCommand, CorrArgs, DualArgs, FramedArgs, ModuleArgs, Output};

fn load_code(source: &str) -> Result<(String, BinaryCode)> {
    let src = CodeSource::parse(source)?;
    let code = src.build_with(|p| fs::read_to_string(p))?;
    Ok((src.name(), code))
}

fn rational(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| anyhow!("{what}: `{text}` is not a rational number"))
}

fn hvector(text: &str) -> Result<HVector> {
    text.parse::<HVector>().with_context(|| format!("bad H vector `{text}`"))
}

fn json_of<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

struct Module {
    name: String,
    code: BinaryCode,
    h: HVector,
}

fn resolve(args: &ModuleArgs) -> Result<Module> {
    let (name, code) = load_code(&args.code)?;
    let power = args.power.unwrap_or(code.len());
    if power != code.len() {
        bail!("--power {power} does not match the code length {}", code.len());
    }
    let h = match &args.h {
        Some(text) => hvector(text)?,
        None => HVector::vacuum(power),
    };
    if h.len() != power {
        bail!("H has {} entries, expected {power}", h.len());
    }
    Ok(Module { name, code, h })
}

pub fn codes(cmd: &CodesCommand) -> Result<Output> {
    match cmd {
        CodesCommand::Check { code } => codes_check(code),
        CodesCommand::Build { code } => {
            let (name, code) = load_code(code)?;
            let text = format_code_file(&code);
            Ok(Output {
                json: json!({
                    "code": name,
                    "n": code.len(),
                    "words": code.words().iter().map(Word::to_bitstring).collect::<Vec<_>>(),
                }),
                tsv: text.clone(),
                pretty: text,
                ok: true,
            })
        }
    }
}

fn codes_check(source: &str) -> Result<Output> {
    let (name, code) = load_code(source)?;
    let report = goodform_conditions(&code);
    let type_ii = is_type_ii(&code);
    let self_dual = code.is_self_dual();
    let weights = code.weight_distribution();
    let dual_size = dual_code(&code).size();
    let json = json!({
        "code": name,
        "n": code.len(),
        "size": code.size(),
        "dim": code.dim(),
        "dual_size": dual_size,
        "conditions": json_of(&report),
        "passes": report.passes(),
        "type_ii": type_ii,
        "self_dual": self_dual,
        "weight_distribution": weights.iter().map(|(w, c)| (w.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
    });
    let mut tsv = String::from("key\tvalue\n");
    let rows: [(&str, String); 10] = [
        ("code", name.clone()),
        ("n", code.len().to_string()),
        ("size", code.size().to_string()),
        ("n_div_4", report.n_div_4.to_string()),
        ("subset_of_even", report.subset_of_even.to_string()),
        ("contains_omega", report.contains_omega.to_string()),
        ("separating", report.separating.to_string()),
        ("passes", report.passes().to_string()),
        ("type_ii", type_ii.to_string()),
        ("self_dual", self_dual.to_string()),
    ];
    for (k, v) in rows {
        let _ = writeln!(tsv, "{k}\t{v}");
    }
    for (w, c) in &weights {
        let _ = writeln!(tsv, "weight_{w}\t{c}");
    }
    let mut pretty = format!("code {name}: n={}, {} words, dimension {}\n", code.len(), code.size(), code.dim());
    let _ = writeln!(pretty, "  4 | n                 {}", report.n_div_4);
    let _ = writeln!(pretty, "  all weights even      {}", report.subset_of_even);
    let _ = writeln!(pretty, "  contains Omega        {}", report.contains_omega);
    let _ = write!(pretty, "  separates points      {}", report.separating);
    match report.failing_pair {
        Some((i, j)) => {
            let _ = writeln!(pretty, " (no word contains {i} but not {j})");
        }
        None => pretty.push('\n'),
    }
    let _ = writeln!(pretty, "  Type II               {type_ii}");
    let _ = writeln!(pretty, "  self-dual             {self_dual}");
    let dist: Vec<String> = weights.iter().map(|(w, c)| format!("{w}:{c}")).collect();
    let _ = writeln!(pretty, "  weights               {}", dist.join(" "));
    let _ = writeln!(pretty, "conditions {}", if report.passes() { "hold" } else { "fail" });
    Ok(Output {
        json,
        tsv,
        pretty,
        ok: report.passes(),
    })
}

pub fn vir_dims(c: &str, h: &str, minimal: Option<&str>, max_level: usize) -> Result<Output> {
    let (c, weights) = match minimal {
        Some(pq) => {
            let (p, q) = pq.split_once(',').ok_or_else(|| anyhow!("--minimal expects `p,q`"))?;
            let p: i64 = p.trim().parse().context("bad p")?;
            let q: i64 = q.trim().parse().context("bad q")?;
            let model = minimal_model_data(p, q)?;
            (model.c, model.weights)
        }
        None => (rational(c, "--c")?, vec![rational(h, "--h")?]),
    };
    let mut rows = Vec::new();
    let mut tsv = String::from("c\th\tlevel\tdim\n");
    let mut pretty = format!("c = {}\n", format_rational(&c));
    for h in &weights {
        let params = CentralParams::new(c.clone(), h.clone());
        let dims: Vec<usize> = (0..=max_level).map(|l| irreducible_basis(&params, l).dim()).collect();
        for (l, d) in dims.iter().enumerate() {
            let _ = writeln!(tsv, "{}\t{}\t{l}\t{d}", format_rational(&c), format_rational(h));
        }
        let list: Vec<String> = dims.iter().map(usize::to_string).collect();
        let _ = writeln!(pretty, "h = {:<6} dims {}", format_rational(h), list.join(" "));
        rows.push(json!({ "h": RationalJson::from(h), "dims": dims }));
    }
    Ok(Output {
        json: json!({ "c": RationalJson::from(&c), "max_level": max_level, "modules": rows }),
        tsv,
        pretty,
        ok: true,
    })
}

fn omega_checks(form: &mut ModuleForm) -> Result<Value> {
    let l2 = form.lattice(2);
    let module = form.module();
    let n = module.power();
    let omega = module.omega_t(&Word::empty(n))?;
    let half = Rational::from_integer((form.code().size() / 2).into());
    let omega_in = contains(module, &l2, &omega)?;
    let mut scaled = Vec::new();
    for i in 1..=n {
        scaled.push(contains(module, &l2, &module.omega_i(i)?.scaled(&half))?);
    }
    Ok(json!({ "omega": omega_in, "half_size_omega_i": scaled, "half_size": RationalJson::from(&half) }))
}

pub fn form_verify(args: &ModuleArgs, max_level: usize) -> Result<Output> {
    let m = resolve(args)?;
    let mut form = ModuleForm::new(&m.code, &m.h)?;
    let lattice = form.graded(max_level);
    let reports = lattice_reports(&m.name, &lattice);
    let full = reports.iter().all(|r| r.full_rank);
    let omega = if m.h.is_vacuum() { Some(omega_checks(&mut form)?) } else { None };
    let omega_ok = omega.as_ref().is_none_or(|o| {
        o["omega"].as_bool() == Some(true) && o["half_size_omega_i"].as_array().is_some_and(|a| a.iter().all(|x| x == true))
    });
    let mut pretty = format!("form generated by v_H, H = ({}), code {}\n", m.h, m.name);
    pretty.push_str("level  weight  dim  rank  denominator\n");
    for r in &reports {
        let weight = m.h.lowest_weight() + Rational::from_integer(r.level.into());
        let flag = if r.full_rank { "" } else { "  RANK DEFICIT" };
        let _ = writeln!(
            pretty,
            "{:>5}  {:>6}  {:>3}  {:>4}  {}{flag}",
            r.level,
            format_rational(&weight),
            r.ambient_dim,
            r.rank,
            r.denominator
        );
    }
    if let Some(o) = &omega {
        let _ = writeln!(pretty, "omega in level 2: {}", o["omega"]);
        let _ = writeln!(pretty, "(|C|/2) omega^(i) in level 2: {}", o["half_size_omega_i"]);
    }
    let _ = writeln!(pretty, "{}", if full && omega_ok { "verified" } else { "FAILED" });
    Ok(Output {
        json: json!({
            "code": m.name,
            "H": m.h,
            "max_level": max_level,
            "levels": reports,
            "omega_checks": omega,
            "full_rank": full,
        }),
        tsv: lattice_tsv(&reports),
        pretty,
        ok: full && omega_ok,
    })
}

fn parse_generator(module: &TensorModule, spec: &str) -> Result<TensorVector> {
    let at = spec
        .find("omega")
        .ok_or_else(|| anyhow!("generator `{spec}` must name omega, omega_i:<i> or omega_T:<bits>"))?;
    let (prefix, name) = spec.split_at(at);
    let scale = if prefix.is_empty() {
        Rational::one()
    } else {
        rational(prefix, "generator scale")?
    };
    let v = if name == "omega" {
        module.omega_t(&Word::empty(module.power()))?
    } else if let Some(i) = name.strip_prefix("omega_i:") {
        module.omega_i(i.parse().context("bad factor index")?)?
    } else if let Some(bits) = name.strip_prefix("omega_T:") {
        let t = Word::from_bitstring(bits)
            .filter(|w| w.len() == module.power())
            .ok_or_else(|| anyhow!("`{bits}` is not a {}-bit word", module.power()))?;
        module.omega_t(&t)?
    } else {
        bail!("unknown generator `{spec}`");
    };
    Ok(v.scaled(&scale))
}

pub fn form_generated(generators: &[String], power: usize, max_level: usize, mode_budget: usize) -> Result<Output> {
    if mode_budget == 0 {
        bail!("--mode-budget must be positive");
    }
    let module = TensorModule::new(HVector::vacuum(power));
    let gens = generators.iter().map(|g| parse_generator(&module, g)).collect::<Result<Vec<_>>>()?;
    let (lattice, report) = saturate_generated_form(&module, &gens, max_level, mode_budget)?;
    let name = format!("generated[{}]", generators.join(","));
    let reports = lattice_reports(&name, &lattice);
    let omega_in = match lattice.per_level.get(&2) {
        Some(l2) => Some(contains(&module, l2, &module.omega_t(&Word::empty(power))?)?),
        None => None,
    };
    let mut pretty = format!("Z-closure of v under the modes of {}\n", generators.join(", "));
    pretty.push_str("level  dim  rank  denominator\n");
    for r in &reports {
        let _ = writeln!(pretty, "{:>5}  {:>3}  {:>4}  {}", r.level, r.ambient_dim, r.rank, r.denominator);
    }
    let _ = writeln!(
        pretty,
        "{} after {} rounds (mode bound {}); {}",
        if report.stabilized { "stable" } else { "NOT stable" },
        report.rounds,
        report.final_mode_budget,
        report.note
    );
    if let Some(b) = omega_in {
        let _ = writeln!(pretty, "omega in level 2: {b}");
    }
    Ok(Output {
        json: json!({
            "generators": generators,
            "power": power,
            "max_level": max_level,
            "levels": reports,
            "saturation": report,
            "omega_in_level_2": omega_in,
        }),
        tsv: lattice_tsv(&reports),
        pretty,
        ok: true,
    })
}

pub fn dual(args: &DualArgs) -> Result<Output> {
    let m = resolve(&args.module)?;
    let mut form = ModuleForm::new(&m.code, &m.h)?;
    let entry = form.lattice(args.level);
    let base = LatticeReport::new(&m.name, &m.h, &entry);
    let d = match graded_dual(form.module(), &entry) {
        Ok(d) => d,
        Err(e) => {
            return Ok(Output {
                json: json!({ "lattice": base, "error": e.to_string() }),
                tsv: format!("error\t{e}\n"),
                pretty: format!("level {}: {e}\n", args.level),
                ok: false,
            })
        }
    };
    let strict = d.contains_lattice && d.index > Rational::one();
    let comparison = if args.compare { Some(compare(&entry, &d.dual)?) } else { None };
    let mut pretty = format!(
        "H = ({}), code {}, level {} (weight {})\n",
        m.h,
        m.name,
        args.level,
        format_rational(&(m.h.lowest_weight() + Rational::from_integer(args.level.into())))
    );
    pretty.push_str("Gram matrix on the HNF basis:\n");
    for row in &d.gram {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        let _ = writeln!(pretty, "  [{}]", cells.join(", "));
    }
    pretty.push_str("dual basis (coordinates):\n");
    for row in &d.dual_basis {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        let _ = writeln!(pretty, "  [{}]", cells.join(", "));
    }
    let _ = writeln!(pretty, "index [dual : form] = {}", format_rational(&d.index));
    let _ = writeln!(
        pretty,
        "form {} dual",
        if !d.contains_lattice {
            "not contained in"
        } else if strict {
            "strictly contained in"
        } else {
            "equal to"
        }
    );
    let mut tsv = String::from("level\trank\tindex\tcontains\tstrict");
    let mut tsv_row = format!(
        "{}\t{}\t{}\t{}\t{}",
        args.level,
        entry.rank(),
        format_rational(&d.index),
        d.contains_lattice,
        strict
    );
    let comparison_json = comparison.as_ref().map(|c| {
        let _ = writeln!(
            pretty,
            "compare: form in dual {}, dual in form {}, equal {}",
            c.a_in_b,
            c.b_in_a,
            c.equal()
        );
        tsv.push_str("\tequal");
        let _ = write!(tsv_row, "\t{}", c.equal());
        json!({
            "a_in_b": c.a_in_b,
            "b_in_a": c.b_in_a,
            "equal": c.equal(),
            "index": c.index.as_ref().map(RationalJson::from),
        })
    });
    tsv.push('\n');
    tsv.push_str(&tsv_row);
    tsv.push('\n');
    Ok(Output {
        json: json!({
            "lattice": base.with_dual(&d),
            "dual_basis": rational_matrix(&d.dual_basis),
            "dual_denominator": isingform::report::big_number(&d.dual.denominator),
            "dual_hnf": d.dual.hnf.iter().map(|r| r.iter().map(isingform::report::big_number).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "contains_lattice": d.contains_lattice,
            "strict": strict,
            "comparison": comparison_json,
        }),
        tsv,
        pretty,
        ok: true,
    })
}

pub fn corr(args: &CorrArgs) -> Result<Output> {
    let (name, code) = load_code(&args.code)?;
    let spec = TripleSpec::new(
        hvector(&args.h1)?,
        hvector(&args.h2)?,
        hvector(&args.h3)?,
        code,
        rational(&args.c, "--c")?,
    )?;
    let f = build_correlation(&spec, args.max_level)?;
    let verdict = verdict_of(&f);
    let checks = if args.no_checks {
        None
    } else {
        Some(check_well_defined(&spec, args.max_level)?)
    };
    let consistent = checks.as_ref().is_none_or(|c| c.passes());
    let report = CorrelationReport::new(&name, &spec, &f, &verdict, checks.clone());
    let mut pretty = format!(
        "Y(v_H1, x) v_H2 paired with W_H3: H1 = ({}), H2 = ({}), H3 = ({}), code {name}, c = {}\n",
        spec.h1,
        spec.h2,
        spec.h3,
        format_rational(&spec.lowest_coeff)
    );
    for (level, entries) in &f.per_level {
        let distinct: std::collections::BTreeSet<String> = entries.iter().map(|(_, v)| format_rational(v)).collect();
        let _ = writeln!(
            pretty,
            "level {level} (x^{}): {} products, values {{{}}}",
            format_rational(&f.exponent(*level)),
            entries.len(),
            distinct.into_iter().collect::<Vec<_>>().join(", ")
        );
    }
    if let Some(c) = &checks {
        for l in &c.levels {
            let _ = writeln!(
                pretty,
                "check level {}: {} words order-independent {}, {} radical vectors vanish {}",
                l.level, l.words, l.order_independent, l.radical_vectors, l.radical_vanishes
            );
        }
    }
    match &verdict.witness {
        None => {
            let _ = writeln!(pretty, "verdict: integral through level {}", args.max_level);
        }
        Some((m, v)) => {
            let _ = writeln!(pretty, "verdict: not integral; F({m}) = {}", format_rational(v));
        }
    }
    if !consistent {
        pretty.push_str("recursion is not well defined for this triple\n");
    }
    Ok(Output {
        json: json_of(&report),
        tsv: report.tsv(),
        pretty,
        ok: verdict.integral && consistent,
    })
}

pub fn e8_weight1() -> Output {
    let e8 = weight1_count_e8();
    let mut tsv = String::from("H\tdim\n");
    for (h, d) in &e8.breakdown {
        let _ = writeln!(tsv, "{h}\t{d}");
    }
    let _ = writeln!(
        tsv,
        "{}\t{}",
        HVector::uniform(16, isingform::IsingWeight::Sixteenth),
        e8.sixteenth_multiplicity * e8.sixteenth_dim
    );
    let pretty = format!(
        "weight-one dimension: {} (two-half summands, {} of them) + {} x {} (1/16 summands) = {}\nvacuum contributes {}\n",
        e8.integral_weight_total,
        e8.breakdown.len(),
        e8.sixteenth_multiplicity,
        e8.sixteenth_dim,
        e8.total,
        e8.vacuum_contribution
    );
    Output {
        json: json!({
            "breakdown": e8.breakdown.iter().map(|(h, d)| json!({ "H": h, "dim": d })).collect::<Vec<_>>(),
            "vacuum_contribution": e8.vacuum_contribution,
            "integral_weight_total": e8.integral_weight_total,
            "sixteenth_multiplicity": e8.sixteenth_multiplicity,
            "sixteenth_dim": e8.sixteenth_dim,
            "total": e8.total,
        }),
        tsv,
        pretty,
        ok: e8.total == 248,
    }
}

fn parse_decomposition(text: &str) -> Result<Vec<(HVector, usize)>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (h, mult) = match item.split_once('*') {
                Some((h, m)) => (h, m.trim().parse().context("bad multiplicity")?),
                None => (item, 1),
            };
            Ok((hvector(h.trim())?, mult))
        })
        .collect()
}

pub fn framed(args: &FramedArgs) -> Result<Output> {
    let (name, code) = load_code(&args.code)?;
    let text = fs::read_to_string(&args.table).with_context(|| format!("reading {}", args.table.display()))?;
    let table = parse_lowest_table(&text)?;
    let decomposition = match &args.decomposition {
        Some(d) => parse_decomposition(d)?,
        None => even_support_decomposition(code.len()),
    };
    let report = framed_criterion(&decomposition, &code, &table, args.max_level)?;
    let mut tsv = String::from("H1\tH2\tH3\tc\tentry_integral\tverdict\n");
    let mut flagged = Vec::new();
    let mut triples = Vec::new();
    for t in &report.triples {
        let verdict = t.verdict.as_ref().map(|v| v.integral);
        let _ = writeln!(
            tsv,
            "{}\t{}\t{}\t{}\t{}\t{}",
            t.h1,
            t.h2,
            t.h3,
            format_rational(&t.coeff),
            t.entry_integral,
            verdict.map_or("-".to_string(), |b| b.to_string())
        );
        if !t.entry_integral || verdict == Some(false) {
            flagged.push(format!("({}) x ({}) -> ({}): c = {}", t.h1, t.h2, t.h3, format_rational(&t.coeff)));
        }
        triples.push(json!({
            "H1": t.h1, "H2": t.h2, "H3": t.h3,
            "c": RationalJson::from(&t.coeff),
            "entry_integral": t.entry_integral,
            "verdict": verdict,
            "witness": t.verdict.as_ref().and_then(|v| v.witness.as_ref()).map(|(m, v)| json!({ "monomial": m, "value": RationalJson::from(v) })),
        }));
    }
    let nonzero = report.triples.iter().filter(|t| !t.coeff.is_zero()).count();
    let mut pretty = format!(
        "{} summands, {} ordered triples ({nonzero} nonzero), code {name}, recursion through level {}\n",
        decomposition.len(),
        report.triples.len(),
        args.max_level
    );
    for f in &flagged {
        let _ = writeln!(pretty, "  flagged {f}");
    }
    let _ = writeln!(pretty, "{}", report.conclusion());
    let summands: BTreeMap<String, usize> = decomposition.iter().map(|(h, m)| (h.to_string(), *m)).collect();
    Ok(Output {
        json: json!({
            "code": name,
            "summands": summands,
            "max_level": args.max_level,
            "triples": triples,
            "hypothesis_holds": report.hypothesis_holds(),
            "conclusion": report.conclusion(),
        }),
        tsv,
        pretty,
        ok: report.hypothesis_holds(),
    })
}
