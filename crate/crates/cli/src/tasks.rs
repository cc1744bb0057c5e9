use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;
use symdyn::collection::collection_counts;
use symdyn::entropy::entropy_estimate;
use symdyn::language::{Budget, Enumerator, DEFAULT_MAX_DEPTH};
use symdyn::linalg::trace_powers;
use symdyn::measures::{empirical_mme, gibbs_check, max_cylinder_deviation, parry_measure, periodic_counts, periodic_measure};
use symdyn::measures::{weighted_gibbs_markov, CylinderMeasure, MarkovMeasure};
use symdyn::model::config::{model_from_config, potential_from_config, ConfigFile};
use symdyn::pressure::{pressure_estimate, transfer_pressure_estimate};
use symdyn::production::{entropy_production_bound, subshift_gap_check};
use symdyn::scalar::parse_rational;
use symdyn::specification::{beta_spec_criterion, check_specification, SpecMode, SpecOptions, SpecOutcome, SpecVariant};
use symdyn::{
    pressure_gap_report, verify_uniqueness_hypotheses, BetaMap, ExactBetaMap, Decomposition, DecompositionRule, Field, Language, OrbitCollection,
    Potential, QuadSurd, ShiftModel, Verdict, Window, Word,
};

use crate::report::{num, Format, Report};
use crate::{Cli, RuleArgs, Task};

struct Ctx {
    model: Option<ShiftModel>,
    phi: Option<Potential<f64>>,
    depth: Option<usize>,
    tau_max: Option<usize>,
    window: Option<Window>,
    m_list: Option<Vec<usize>>,
    enumerator: Enumerator,
}

fn parse_m_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow!("bad M value {t:?}")))
        .collect()
}

fn read_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    ConfigFile::parse(&text).with_context(|| format!("in {}", path.display()))
}

impl Ctx {
    fn model(&self) -> Result<&ShiftModel> {
        self.model.as_ref().ok_or_else(|| anyhow!("this task needs a model: pass --model <config>"))
    }

    fn phi(&self) -> Result<&Potential<f64>> {
        self.phi.as_ref().ok_or_else(|| anyhow!("this task needs potential.* keys in the config"))
    }

    fn lang(&self, depth: usize) -> Result<Language> {
        Ok(self.enumerator.run(self.model()?, depth)?)
    }

    fn window_or(&self, depth: usize) -> Result<Window> {
        match self.window {
            Some(w) => Ok(w),
            None => Ok(Window::new((depth / 2).max(1), depth)?),
        }
    }
}

/// Parse flags and config, run the task and return the report with its destination.
pub fn run(cli: Cli) -> Result<(Report, Format, Option<PathBuf>)> {
    let c = cli.common;
    let mut ctx = Ctx {
        model: None,
        phi: None,
        depth: c.depth,
        tau_max: c.tau_max,
        window: c.window.as_deref().map(str::parse).transpose()?,
        m_list: c.m_list.as_deref().map(parse_m_list).transpose()?,
        enumerator: Enumerator::default(),
    };
    let mut format = c.format.unwrap_or(Format::Table);
    let mut output = c.output;
    let mut max_depth = c.max_depth;
    if let Some(path) = &c.model {
        let mut cfg = read_config(path)?;
        let ctx_err = || format!("in {}", path.display());
        ctx.model = Some(model_from_config(&mut cfg).with_context(ctx_err)?);
        ctx.phi = potential_from_config(&mut cfg).with_context(ctx_err)?;
        let usize_of = |v: &str| v.parse::<usize>().ok();
        if let Some(d) = cfg.take_with("depth", usize_of).with_context(ctx_err)? {
            ctx.depth = Some(d);
        }
        if let Some(t) = cfg.take_with("tau_max", usize_of).with_context(ctx_err)? {
            ctx.tau_max = Some(t);
        }
        if let Some(w) = cfg.take_with("window", |v| v.parse::<Window>().ok()).with_context(ctx_err)? {
            ctx.window = Some(w);
        }
        if let Some(m) = cfg.take_with("m_list", |v| parse_m_list(v).ok()).with_context(ctx_err)? {
            ctx.m_list = Some(m);
        }
        if let Some(f) = cfg.take_with("format", |v| v.parse::<Format>().ok()).with_context(ctx_err)? {
            format = f;
        }
        if let Some(o) = cfg.take_with("output", |v| Some(PathBuf::from(v))).with_context(ctx_err)? {
            output = Some(o);
        }
        if let Some(d) = cfg.take_with("max_depth", usize_of).with_context(ctx_err)? {
            max_depth = Some(d);
        }
        cfg.finish().with_context(ctx_err)?;
    }
    let mut budget = Budget::default();
    budget.max_depth = max_depth.unwrap_or(DEFAULT_MAX_DEPTH);
    ctx.enumerator = Enumerator::with_budget(budget);

    let report = match cli.task {
        Task::Enumerate => enumerate(&ctx)?,
        Task::Entropy => entropy(&ctx)?,
        Task::Pressure { transfer } => pressure(&ctx, transfer)?,
        Task::SpecCheck { variant, sample_pairs, seed } => spec_check(&ctx, &variant, sample_pairs, seed)?,
        Task::Decompose { rule, split } => decompose(&ctx, &rule, split.as_deref())?,
        Task::VerifyUniqueness { rule } => verify_uniqueness(&ctx, &rule)?,
        Task::Mme { n, d, len, tolerance } => mme(&ctx, n, d, len, tolerance)?,
        Task::Gibbs { measure, h, n, d, declared_k } => gibbs(&ctx, &measure, h, n, d, declared_k)?,
        Task::Periodic { n_max, period, cyl_depth } => periodic(&ctx, n_max, period, cyl_depth)?,
        Task::BetaCode { beta, x, digits, word } => beta_code(&beta, x.as_deref(), digits, word.as_deref())?,
        Task::EntropyGap { mode, w1, w2, k_max, subshift, w, tau, n, big_n, pieces } => match mode.as_str() {
            "production" => production(&ctx, w1.as_deref(), w2.as_deref(), k_max)?,
            "surgery" => surgery(&ctx, subshift.as_deref(), w.as_deref(), tau, n, big_n, pieces)?,
            other => bail!("unknown entropy-gap mode {other:?} (production | surgery)"),
        },
    };
    Ok((report, format, output))
}

fn enumerate(ctx: &Ctx) -> Result<Report> {
    let depth = ctx.depth.unwrap_or(16);
    let lang = ctx.lang(depth)?;
    let counts = lang.counts();
    let mut r = Report::new("enumerate", &counts)?.columns(&["n", "count"]).fact("nodes", lang.node_count());
    for (n, c) in counts.iter().enumerate().skip(1) {
        r.row(vec![n.to_string(), c.to_string()]);
    }
    Ok(r)
}

fn entropy(ctx: &Ctx) -> Result<Report> {
    let depth = ctx.depth.unwrap_or(20);
    let lang = ctx.lang(depth)?;
    let window = ctx.window_or(depth)?;
    let est = entropy_estimate::<f64>(&lang, window)?;
    let mut r = Report::new("entropy", &est)?.columns(&["n", "count", "log_count", "point_estimate", "running_fekete"]);
    for row in &est.rows {
        r.row(vec![row.n.to_string(), lang.count(row.n).to_string(), num(row.value), num(row.point_estimate), num(row.running_fekete)]);
    }
    let (lo, hi) = est.difference_range();
    Ok(r.fact("window", window)
        .fact("fekete_bound", num(est.fekete_bound))
        .fact("fekete_certified", est.fekete_certified)
        .fact("tail_max", num(est.tail_max))
        .fact("difference_range", format!("[{}, {}]", num(lo), num(hi)))
        .fact("estimate", num(est.regression)))
}

fn pressure(ctx: &Ctx, transfer: bool) -> Result<Report> {
    let model = ctx.model()?;
    let phi = ctx.phi()?;
    let depth = ctx.depth.unwrap_or(16);
    let window = ctx.window_or(depth)?;
    let est = if transfer {
        let lc = phi.as_locally_constant().ok_or_else(|| anyhow!("--transfer needs a locally constant potential"))?;
        transfer_pressure_estimate(model, lc, window)?
    } else {
        let lang = ctx.lang(window.max)?;
        pressure_estimate(&OrbitCollection::full(&lang), phi, window)?
    };
    let mut r = Report::new("pressure", &est)?.columns(&["n", "log_upper", "log_lower"]);
    for n in 1..=est.sums.depth() {
        r.row(vec![n.to_string(), num(est.sums.log_upper[n]), num(est.sums.log_lower[n])]);
    }
    r = r
        .fact("window", window)
        .fact("upper_fekete", num(est.upper.fekete_bound))
        .fact("upper_fekete_certified", est.upper.fekete_certified)
        .fact("lower_estimate", num(est.lower.regression));
    if let (Some(sft), Some(lc)) = (model.as_sft(), phi.as_locally_constant()) {
        let (_, log_rho) = weighted_gibbs_markov(sft, lc)?;
        r = r.fact("log_spectral_radius", num(log_rho));
    }
    Ok(r.fact("estimate", num(est.upper.regression)))
}

fn outcome_verdict(o: &SpecOutcome) -> Verdict {
    match o {
        SpecOutcome::Certified(_) => Verdict::Pass,
        SpecOutcome::Counterexample(_) => Verdict::Fail,
        SpecOutcome::Inconclusive { .. } => Verdict::Inconclusive,
    }
}

fn outcome_status(o: &SpecOutcome) -> String {
    match o {
        SpecOutcome::Certified(c) => format!("certified tau={}", c.tau),
        SpecOutcome::Counterexample(c) => format!("counterexample v={} w={}", c.v, c.w),
        SpecOutcome::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

fn spec_check(ctx: &Ctx, variant: &str, sample_pairs: Option<usize>, seed: u64) -> Result<Report> {
    let model = ctx.model()?;
    let tau_max = ctx.tau_max.unwrap_or(2);
    let depth = ctx.depth.unwrap_or(8);
    let lang = ctx.lang(depth + tau_max)?;
    let mut opts = SpecOptions::new(tau_max, depth).variant(variant.parse::<SpecVariant>()?);
    opts.seed = seed;
    if let Some(pairs) = sample_pairs {
        opts = opts.mode(SpecMode::Sampled { pairs, seed });
    }
    let outcome = check_specification(&OrbitCollection::full(&lang), Some(model), &opts)?;
    let mut r = Report::new("spec-check", &outcome)?
        .columns(&["v", "u", "w"])
        .verdict(outcome_verdict(&outcome))
        .fact("status", outcome_status(&outcome))
        .fact("depth", depth)
        .fact("tau_max", tau_max)
        .fact("variant", variant);
    if let Some(cert) = outcome.certificate() {
        r = r.fact("tau", cert.tau).fact("pairs_checked", cert.pairs_checked).fact("kfold", format!("{:?}", cert.kfold));
        for g in &cert.glue {
            r.row(vec![g.v.to_string(), g.u.to_string(), g.w.to_string()]);
        }
    }
    if let Some(b) = model.as_beta() {
        let c = beta_spec_criterion(b.z())?;
        r = r
            .fact("z_longest_zero_run", c.longest_zero_run)
            .fact("z_tau_lower_bound", c.tau_lower_bound)
            .fact("z_tau_upper_bound", c.tau_upper_bound.map_or("undecided".into(), |t| t.to_string()));
    }
    Ok(r)
}

fn build_rule(ctx: &Ctx, rule: &RuleArgs) -> Result<Decomposition> {
    let model = ctx.model()?;
    let rule = match rule.rule.as_str() {
        "beta" => DecompositionRule::BetaCanonical,
        "trivial" => DecompositionRule::Trivial,
        "threshold" => DecompositionRule::Threshold {
            phi: ctx.phi()?.clone(),
            r: rule.r.ok_or_else(|| anyhow!("the threshold rule needs --r"))?,
        },
        other => bail!("unknown decomposition rule {other:?} (beta | trivial | threshold)"),
    };
    Ok(Decomposition::build(model, rule)?)
}

fn decompose(ctx: &Ctx, rule: &RuleArgs, split: Option<&str>) -> Result<Report> {
    let dec = build_rule(ctx, rule)?;
    let depth = ctx.depth.unwrap_or(12);
    let lang = ctx.lang(depth)?;
    let counts = |p| collection_counts(&lang, p, depth);
    let (cp, g, cs, ob) = (counts(&dec.prefix), counts(&dec.good), counts(&dec.suffix), counts(&dec.obstructions()));
    let cover = dec.verify_cover(&lang);
    let data = json!({
        "decomposition": dec.name,
        "words": lang.counts(),
        "prefix": cp,
        "good": g,
        "suffix": cs,
        "obstructions": ob,
        "cover": cover.as_ref().map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()),
    });
    let mut r = Report::new("decompose", data)?
        .columns(&["n", "words", "prefix", "good", "suffix", "obstructions"])
        .fact("decomposition", &dec.name)
        .verdict(Verdict::from_bool(cover.is_ok()));
    for n in 1..=depth {
        r.row(vec![n.to_string(), lang.count(n).to_string(), cp[n].to_string(), g[n].to_string(), cs[n].to_string(), ob[n].to_string()]);
    }
    if let Err(e) = &cover {
        r = r.fact("cover", e);
    }
    for word in split.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let w: Word = word.parse()?;
        let s = dec.split(w.symbols())?;
        r = r.fact(&format!("split {w}"), format!("{} | {} | {}", s.prefix, s.good, s.suffix));
    }
    Ok(r)
}

fn verify_uniqueness(ctx: &Ctx, rule: &RuleArgs) -> Result<Report> {
    let dec = build_rule(ctx, rule)?;
    let tau_max = ctx.tau_max.unwrap_or(2);
    let depth = ctx.depth.unwrap_or(8);
    let lang = ctx.lang(depth + tau_max)?;
    let window = ctx.window_or(depth + tau_max)?;
    let m_list = ctx.m_list.clone().unwrap_or_else(|| vec![0, 1, 2, 3]);
    let rep = verify_uniqueness_hypotheses(&dec, &lang, Some(ctx.model()?), &m_list, tau_max, depth, window)?;
    let mut r = Report::new("verify-uniqueness", &rep)?.columns(&["m", "spec", "min_density"]).verdict(rep.verdict);
    for row in &rep.per_m {
        r.row(vec![row.m.to_string(), outcome_status(&row.spec), num(row.min_density)]);
    }
    let h_obs = rep.obstruction_entropy.as_ref().map_or("empty".to_string(), |e| num(e.tail_max));
    r = r
        .fact("decomposition", &rep.decomposition)
        .fact("specification", rep.specification)
        .fact("h_obstructions", h_obs)
        .fact("h_language", num(rep.entropy.regression))
        .fact("gap", rep.gap.map_or("vacuous".to_string(), num));
    if let Some(phi) = &ctx.phi {
        let p = pressure_gap_report(&dec, &lang, phi, window)?;
        let p_obs = p.obstructions.as_ref().map_or("empty".to_string(), |e| num(e.upper.tail_max));
        r = r
            .fact("P_obstructions (upper)", p_obs)
            .fact("P_phi (lower)", num(p.pressure.lower.regression))
            .fact("pressure gap (report only)", p.gap.map_or("vacuous".to_string(), num));
    }
    Ok(r)
}

fn sft_reference(model: &ShiftModel) -> Result<Option<MarkovMeasure<f64>>> {
    model.as_sft().map(parry_measure::<f64>).transpose().map_err(Into::into)
}

fn mme(ctx: &Ctx, n: usize, d: usize, len: usize, tolerance: Option<f64>) -> Result<Report> {
    let model = ctx.model()?;
    let lang = ctx.lang(n + d)?;
    let mu = empirical_mme(&lang, n, d)?;
    let reference = sft_reference(model)?;
    let mut r = Report::new("mme", json!({ "n": n, "d": d, "len": len }))?.columns(&["word", "measure", "reference", "deviation"]);
    let mut worst = 0.0f64;
    for j in 1..=len.min(lang.depth()) {
        lang.for_each_word(j, |w| {
            let m = mu.mass(w);
            let (rf, dev) = match &reference {
                Some(p) => {
                    let v = p.mass(w);
                    worst = worst.max((m - v).abs());
                    (num(v), num((m - v).abs()))
                }
                None => (String::new(), String::new()),
            };
            r.row(vec![Word::from_slice(w).to_string(), num(m), rf, dev]);
        });
    }
    r.data["max_deviation"] = json!(worst);
    r = r.fact("invariance_defect", num(symdyn::scalar::ratio_to_f64(&mu.invariance_defect(len.min(n - 1).max(1)))));
    if reference.is_some() {
        r = r.fact("max_deviation", num(worst));
        if let Some(t) = tolerance {
            r = r.fact("tolerance", num(t)).verdict(Verdict::from_bool(worst <= t));
        }
    }
    Ok(r)
}

fn gibbs(ctx: &Ctx, measure: &str, h: Option<f64>, n: Option<usize>, d: usize, declared_k: Option<f64>) -> Result<Report> {
    let model = ctx.model()?;
    let depth = ctx.depth.unwrap_or(14);
    let need = |what: &str| anyhow!("--measure {measure} needs {what}");
    let (rep, target_name) = match measure {
        "parry" => {
            let sft = model.as_sft().ok_or_else(|| need("an SFT model"))?;
            let mu = parry_measure::<f64>(sft)?;
            let lang = ctx.lang(depth)?;
            (gibbs_check(&mu, h.unwrap_or_else(|| mu.entropy()), None, &lang, depth, None, declared_k)?, "h")
        }
        "weighted" => {
            let sft = model.as_sft().ok_or_else(|| need("an SFT model"))?;
            let phi = ctx.phi()?;
            let lc = phi.as_locally_constant().ok_or_else(|| need("a locally constant potential"))?;
            let (mu, p) = weighted_gibbs_markov(sft, lc)?;
            let lang = ctx.lang(depth + lc.window())?;
            (gibbs_check(&mu, h.unwrap_or(p), Some(phi), &lang, depth, None, declared_k)?, "P")
        }
        "empirical" => {
            let n = n.ok_or_else(|| need("--n"))?;
            let lang = ctx.lang(n + d)?;
            let mu = empirical_mme(&lang, n, d)?;
            let target = match h {
                Some(h) => h,
                None => entropy_estimate::<f64>(&lang, Window::new((lang.depth() / 2).max(1), lang.depth())?)?.regression,
            };
            (gibbs_check(&mu, target, None, &lang, depth.min(n), None, declared_k)?, "h")
        }
        "periodic" => {
            let n = n.ok_or_else(|| need("--n (the period)"))?;
            let lang = ctx.lang(n.max(depth))?;
            let mu = periodic_measure(model, &lang, n, depth)?;
            let target = match (h, sft_reference(model)?) {
                (Some(h), _) => h,
                (None, Some(p)) => p.entropy(),
                (None, None) => entropy_estimate::<f64>(&lang, Window::new((lang.depth() / 2).max(1), lang.depth())?)?.regression,
            };
            (gibbs_check(&mu, target, None, &lang, depth, None, declared_k)?, "h")
        }
        other => bail!("unknown measure {other:?} (parry | weighted | empirical | periodic)"),
    };
    let mut r = Report::new("gibbs", &rep)?.columns(&["n", "K_lower", "K_upper", "running_K"]).verdict(rep.verdict);
    for row in &rep.rows {
        r.row(vec![row.n.to_string(), num(row.k_lower), num(row.k_upper), num(row.running_k)]);
    }
    Ok(r.fact("measure", measure).fact(target_name, num(rep.target)).fact("K", num(rep.k())).fact("drift", num(rep.drift)).fact("stable", rep.stable))
}

fn periodic(ctx: &Ctx, n_max: usize, period: Option<usize>, cyl_depth: usize) -> Result<Report> {
    let model = ctx.model()?;
    let lang = ctx.lang(n_max.max(period.unwrap_or(0)).max(cyl_depth))?;
    let table = periodic_counts(model, &lang, n_max)?;
    let oracle = model.as_sft().map(|s| trace_powers(&s.live_matrix(), n_max));
    let mut r = Report::new("periodic", &table)?.columns(&["n", "per_n", "oracle"]);
    let mut agree = true;
    for n in 1..=n_max {
        let o = oracle.as_ref().map(|t| t[n - 1].to_string());
        if let Some(o) = &o {
            agree &= *o == table.count(n).to_string();
        }
        r.row(vec![n.to_string(), table.count(n).to_string(), o.unwrap_or_default()]);
    }
    if let Some(parry) = sft_reference(model)? {
        r = r.fact("h", num(parry.entropy())).fact("two_sided_constant", num(table.two_sided_constant(parry.entropy())));
        if let Some(p) = period {
            let mu = periodic_measure(model, &lang, p, cyl_depth)?;
            r = r.fact(&format!("max_deviation_period_{p}"), num(max_cylinder_deviation(&mu, &parry, &lang, cyl_depth)));
        }
        r = r.verdict(Verdict::from_bool(agree));
    }
    Ok(r)
}

fn beta_report<F: Field>(map: BetaMap<F>, x: Option<F>, digits: usize, word: Option<&str>, beta: &str) -> Result<Report> {
    let z = map.quasi_greedy_z(digits);
    let mut r = Report::new("beta-code", json!({ "beta": beta, "z": &z }))?
        .columns(&["k", "digit", "certain"])
        .fact("beta", beta)
        .fact("z", &z.digits)
        .fact("z_certified", z.certified_len());
    if let Some(x) = x {
        let c = map.code(&x, digits);
        for (k, (d, ok)) in c.digits.symbols().iter().zip(&c.certain).enumerate() {
            r.row(vec![(k + 1).to_string(), d.to_string(), ok.to_string()]);
        }
        r.data["code"] = serde_json::to_value(&c)?;
        r = r.fact("code", &c.digits).fact("code_certified", c.certified_len());
    }
    if let Some(w) = word {
        let w: Word = w.parse()?;
        let iv = map.interval_of_word(w.symbols());
        r.data["interval"] = json!(iv.describe());
        r = r.fact(&format!("I({w})"), iv.describe());
    }
    Ok(r)
}

fn beta_code(beta: &str, x: Option<&str>, digits: usize, word: Option<&str>) -> Result<Report> {
    let parse_x = |s: &str| parse_rational(s).ok_or_else(|| anyhow!("bad point {s:?}"));
    if beta == "golden" {
        let x = x.map(parse_x).transpose()?.map(QuadSurd::rational);
        beta_report(BetaMap::new(QuadSurd::golden())?, x, digits, word, beta)
    } else {
        let b = parse_rational(beta).ok_or_else(|| anyhow!("bad β {beta:?}"))?;
        beta_report(ExactBetaMap::new(b)?, x.map(parse_x).transpose()?, digits, word, beta)
    }
}

fn production(ctx: &Ctx, w1: Option<&str>, w2: Option<&str>, k_max: usize) -> Result<Report> {
    let model = ctx.model()?;
    let w1: Word = w1.ok_or_else(|| anyhow!("production mode needs --w1"))?.parse()?;
    let w2: Word = w2.ok_or_else(|| anyhow!("production mode needs --w2"))?.parse()?;
    let tau_max = ctx.tau_max.unwrap_or(2);
    let depth = ctx.depth.unwrap_or(8);
    let lang = ctx.lang(depth + tau_max)?;
    let opts = SpecOptions::new(tau_max, depth).variant(SpecVariant::Exact);
    let outcome = check_specification(&OrbitCollection::full(&lang), Some(model), &opts)?;
    let cert = outcome.certificate().ok_or_else(|| anyhow!("no exact-gap certificate: {}", outcome_status(&outcome)))?;
    let rep = entropy_production_bound(model, cert, &w1, &w2, k_max)?;
    let mut r = Report::new("entropy-gap", &rep)?.columns(&["k", "images", "distinct", "length"]).verdict(Verdict::from_bool(rep.injective));
    for row in &rep.rows {
        r.row(vec![row.k.to_string(), row.images.to_string(), row.distinct.to_string(), row.length.to_string()]);
    }
    Ok(r.fact("tau", rep.tau).fact("entropy_lower_bound", num(rep.bound)))
}

fn surgery(
    ctx: &Ctx,
    subshift: Option<&Path>,
    w: Option<&str>,
    tau: usize,
    n: Option<usize>,
    big_n: Option<usize>,
    pieces: usize,
) -> Result<Report> {
    let x = ctx.model()?;
    let path = subshift.ok_or_else(|| anyhow!("surgery mode needs --subshift <config>"))?;
    let mut cfg = read_config(path)?;
    let y = model_from_config(&mut cfg).with_context(|| format!("in {}", path.display()))?;
    cfg.finish().with_context(|| format!("in {}", path.display()))?;
    let w: Word = w.ok_or_else(|| anyhow!("surgery mode needs --w"))?.parse()?;
    let n = n.ok_or_else(|| anyhow!("surgery mode needs --n"))?;
    let big_n = big_n.ok_or_else(|| anyhow!("surgery mode needs --big-n"))?;
    let ly = ctx.enumerator.run(&y, n * big_n)?;
    let rep = subshift_gap_check(x, &ly, &w, tau, n, big_n, pieces)?;
    let mut r = Report::new("entropy-gap", &rep)?
        .columns(&["sets", "realized", "predicted", "predicted_alpha_form", "max_preimages", "preimage_bound"])
        .verdict(Verdict::from_bool(rep.pass));
    r.row(vec![
        rep.sets.to_string(),
        rep.realized.to_string(),
        num(rep.predicted),
        num(rep.predicted_alpha_form),
        rep.max_preimages.to_string(),
        rep.preimage_bound.to_string(),
    ]);
    Ok(r.fact("base_count", rep.base_count).fact("escaped", rep.escaped).fact("rate", num(rep.rate)))
}
