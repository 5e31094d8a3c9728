//! Command dispatch and report emission for the `lieleib` binary.

use std::collections::BTreeMap;
use std::fmt;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use lieleib_core::algebra::{parse_instance, sl2_trace_form};
use lieleib_core::bar::check_bar;
use lieleib_core::dsl::{parse_relation, parse_with, SymbolTable};
use lieleib_core::free_operad::{format_element, MAX_ARITY};
use lieleib_core::homotopy::{
    a1_ledger, a2_ledger, affine_zeta, cartan_cocycle_check, derived_homotopy_sign, higher_derived_family,
    invariant_cocycle_check, invariant_identity_formal, sl2_grassmann, verify_shll_square, FormalFamily,
    MAX_FORMAL_ARITY,
};
use lieleib_core::quadratic::{
    check_distributive, graded_quotient_dims, holds_in, orthogonal_complement, quotient_dim, relation_span,
};
use lieleib_core::zoo::{delta_rules, named_dual, parse_delta, presentation};
use lieleib_core::{Generator, Glyph, Signature, SwapKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "lieleib", version, about = "Exact checks for Lie-Leibniz operads, bar complexes and homotopy signs")]
pub struct Cli {
    /// Print the report as key-sorted JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quotient dimensions of a registered operad by arity.
    Dims {
        operad: String,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        /// Also split each arity by weight.
        #[arg(long)]
        graded: bool,
    },
    /// Certify a rewrite rule Q∘P ⇒ P∘Q by the arity-4 dimension count.
    CheckDistributive {
        p: String,
        q: String,
        /// Replace the registered rewrite rules (repeatable).
        #[arg(long = "delta")]
        delta: Vec<String>,
    },
    /// Orthogonal complement of the relations and the registered dual.
    KoszulDual { operad: String },
    /// Axioms and ∂² = 0 for a Lie-Leibniz instance file.
    CheckBar {
        instance_file: std::path::PathBuf,
        #[arg(long, default_value_t = 4)]
        weight: usize,
    },
    /// Square of the derived sh Lie-Leibniz family, invariance and Cartan checks.
    CheckSh {
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        /// Comma-separated degrees of the leaf labels 1, 2, … (default all 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        label_degrees: Vec<i64>,
    },
    /// Replay the sign ledgers of the square computation.
    VerifyAppendix {
        #[arg(long, default_value_t = 5)]
        max_arity: usize,
    },
    /// Parse a relation and print its normal form.
    Parse {
        #[arg(allow_hyphen_values = true)]
        text: String,
        /// Operad whose generators and relations are used.
        #[arg(long, default_value = "LL")]
        operad: String,
        /// Product symbols, e.g. "(,):lie:0 [,]:leib:1".
        #[arg(long)]
        gens: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// Outcome of one invocation. Fields are declared in key order.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub checks: BTreeMap<String, Status>,
    pub command: String,
    pub dims: BTreeMap<String, Value>,
    pub signs: BTreeMap<String, Value>,
    pub status: Status,
    pub version: String,
    pub witnesses: Vec<String>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    fn new(command: String) -> Self {
        Report {
            checks: BTreeMap::new(),
            command,
            dims: BTreeMap::new(),
            signs: BTreeMap::new(),
            status: Status::Pass,
            version: VERSION.to_string(),
            witnesses: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        let st = if ok { Status::Pass } else { Status::Fail };
        if !ok {
            self.status = Status::Fail;
        }
        self.checks.insert(name.into(), st);
        ok
    }

    fn dim(&mut self, key: impl Into<String>, v: impl Into<Value>) {
        self.dims.insert(key.into(), v.into());
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// Bad input: unknown names, malformed files or expressions, bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<E: fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

/// What the binary prints and returns.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parse `argv` (including the program name) and run it.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli.command) {
        Ok(r) => Outcome {
            stdout: if cli.json { r.to_json() + "\n" } else { r.to_text() },
            stderr: String::new(),
            code: r.exit_code(),
        },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    }
}

pub fn execute(cmd: &Command) -> Result<Report, UsageError> {
    match cmd {
        Command::Dims { operad, max_arity, graded } => dims(operad, *max_arity, *graded),
        Command::CheckDistributive { p, q, delta } => distributive(p, q, delta),
        Command::KoszulDual { operad } => koszul_dual(operad),
        Command::CheckBar { instance_file, weight } => bar(instance_file, *weight),
        Command::CheckSh { max_arity, label_degrees } => sh(*max_arity, label_degrees),
        Command::VerifyAppendix { max_arity } => appendix(*max_arity),
        Command::Parse { text, operad, gens } => parse(text, operad, gens.as_deref()),
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form dimension, for the operads that have one.
pub fn closed_form(name: &str, n: usize) -> Option<usize> {
    match name {
        "Com" => Some(1),
        "Lie" => Some(factorial(n - 1)),
        "Leib" | "sLeib" | "Zinb" | "sInvZinb" => Some(factorial(n)),
        "Perm" | "sPerm" => Some(n),
        "D" => Some((1 << n) - 1),
        "LL" | "sInvLL" => Some(factorial(n - 1) * (1..=n).map(|m| binomial(n, m)).sum::<usize>()),
        _ => None,
    }
}

fn dims(name: &str, max_arity: usize, graded: bool) -> Result<Report, UsageError> {
    if max_arity == 0 || max_arity > MAX_ARITY {
        return Err(UsageError(format!("--max-arity must lie in 1..={MAX_ARITY}")));
    }
    let p = presentation(name).map_err(usage)?;
    let mut r = Report::new(format!("dims {name} --max-arity {max_arity}"));
    let mut values = Vec::new();
    for n in 1..=max_arity {
        let d = quotient_dim(&p, n).map_err(usage)?;
        values.push(d.to_string());
        r.dim(format!("{name}({n})"), d);
        let mut line = format!("{name}({n}) = {d}");
        if let Some(c) = closed_form(name, n) {
            r.check(format!("closed form at arity {n}"), c == d);
            line.push_str(&format!("  closed form {c}"));
        }
        if graded {
            let g = graded_quotient_dims(&p, n).map_err(usage)?;
            let parts: Vec<String> = g.iter().map(|(w, k)| format!("w{w}:{k}")).collect();
            for (w, k) in &g {
                r.dim(format!("{name}^{w}({n})"), *k);
            }
            line.push_str(&format!("  [{}]", parts.join(" ")));
        }
        r.line(line);
    }
    r.line(values.join(", "));
    Ok(r)
}

fn distributive(p: &str, q: &str, delta: &[String]) -> Result<Report, UsageError> {
    let pp = presentation(p).map_err(usage)?;
    let qq = presentation(q).map_err(usage)?;
    let rules = if delta.is_empty() {
        delta_rules(p, q).map_err(usage)?
    } else {
        let texts: Vec<&str> = delta.iter().map(String::as_str).collect();
        parse_delta(p, q, &texts).map_err(usage)?
    };
    let rep = check_distributive(&pp, &qq, &rules).map_err(usage)?;
    let mut r = Report::new(format!("check-distributive {p} {q}"));
    r.line(format!("P(2)∘(Q(2)⊗Q(2)) = {}", rep.compose.pqq));
    r.line(format!("P(2)∘Q(3) = {}", rep.compose.pq3));
    r.line(format!("P(3)∘Q(2) = {}", rep.compose.p3q));
    r.line(rep.summary());
    r.dim("P2∘(Q2⊗Q2)", rep.compose.pqq);
    r.dim("P2∘Q3", rep.compose.pq3);
    r.dim("P3∘Q2", rep.compose.p3q);
    r.dim("total", rep.compose.total());
    for (w, k) in &rep.graded {
        r.dim(format!("weight {w}"), *k);
    }
    r.check("distributive", rep.pass);
    if !rep.pass {
        r.witnesses.push(format!("deficit {}", rep.deficit()));
    }
    Ok(r)
}

fn koszul_dual(name: &str) -> Result<Report, UsageError> {
    let p = presentation(name).map_err(usage)?;
    let (_, perp) = orthogonal_complement(&p).map_err(usage)?;
    let q3 = quotient_dim(&p, 3).map_err(usage)?;
    let mut r = Report::new(format!("koszul-dual {name}"));
    r.dim("R⊥", perp.rank());
    r.dim(format!("{name}(3)"), q3);
    r.check("dim R⊥ = dim P(3)", perp.rank() == q3);
    let tail = match named_dual(name) {
        Some(d) => {
            let dp = presentation(d).map_err(usage)?;
            let s = relation_span(&dp, 3).map_err(usage)?;
            let same = s.rank() == perp.rank() && perp.basis_vectors().iter().all(|v| s.contains_vec(v));
            r.check(format!("matches {d}"), same);
            if same {
                format!("matches {d} presentation")
            } else {
                format!("does not match {d} presentation")
            }
        }
        None => "no registered dual".to_string(),
    };
    r.line(format!("dim R⊥ = {}; {tail}", perp.rank()));
    Ok(r)
}

fn bar(path: &std::path::Path, weight: usize) -> Result<Report, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let alg = parse_instance(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let rep = check_bar(&alg, weight).map_err(usage)?;
    let mut r = Report::new(format!("check-bar {} --weight {weight}", path.display()));
    r.dim("dim", alg.space.dim());
    r.dim("words", rep.square.words);
    r.signs.insert("bidegree".into(), serde_json::json!([alg.p, alg.q]));
    r.check("axioms", rep.axioms.pass);
    match &rep.axioms.failure {
        None => r.line(format!("{}: axioms hold on {} instances", alg.name, rep.axioms.checked)),
        Some(f) => {
            r.line(format!("{}: {} fails on ({}): {}", alg.name, f.axiom, f.args.join(", "), f.residual));
            r.witnesses.push(format!("{}({}) = {}", f.axiom, f.args.join(", "), f.residual));
        }
    }
    r.check("∂² = 0", rep.square.zero);
    r.line(rep.square.to_string());
    if let Some(w) = &rep.square.witness {
        r.witnesses.push(format!("∂∂({}) = {}", w.word, w.residual));
    }
    Ok(r)
}

fn sh(max_arity: usize, label_degrees: &[i64]) -> Result<Report, UsageError> {
    if !(2..=MAX_FORMAL_ARITY).contains(&max_arity) {
        return Err(UsageError(format!("--max-arity must lie in 2..={MAX_FORMAL_ARITY}")));
    }
    let degs: Vec<i64> = if label_degrees.is_empty() { vec![0; max_arity] } else { label_degrees.to_vec() };
    if degs.len() < max_arity {
        return Err(UsageError(format!("--label-degrees needs {max_arity} entries")));
    }
    let mut r = Report::new(format!("check-sh --max-arity {max_arity}"));
    let sq = verify_shll_square(max_arity, &degs).map_err(usage)?;
    for (t, k) in &sq.relations {
        r.dim(format!("relations({t})"), *k);
    }
    r.dim("blocks", sq.blocks.len());
    let terms: usize = sq.blocks.iter().map(|b| b.terms).sum();
    r.dim("terms", terms);
    r.check("square vanishes modulo sh Lie relations", sq.zero);
    r.check("arity lemma", sq.arity_lemma);
    r.check("reduction orders agree", sq.confluence.1 == 0);
    r.line(format!(
        "square: {} blocks, {} terms, {}",
        sq.blocks.len(),
        terms,
        if sq.zero { "zero modulo relations" } else { "NONZERO" }
    ));
    if let Some(w) = &sq.witness {
        r.witnesses.push(format!("{}: {} ↦ {}", w.law, w.word, w.residual));
    }
    let cancel_ok = sq.cancellations.iter().all(|c| c.ratio.is_none_or(|x| x == -1));
    r.check("paired terms cancel", cancel_ok);
    for c in &sq.cancellations {
        r.signs.insert(
            format!("cancel m={} n={} i={} j={} p={}", c.m, c.n, c.i, c.j, c.p),
            c.ratio.map_or(Value::Null, Value::from),
        );
    }
    r.check("diagonal terms", sq.diagonal.iter().all(|d| d.holds()));
    for d in &sq.diagonal {
        r.signs.insert(format!("diagonal m={} n={} k={}", d.m, d.n, d.k), d.ratio.map_or(Value::Null, Value::from));
    }
    r.line(format!("cancellations: {}, diagonal terms: {}", sq.cancellations.len(), sq.diagonal.len()));

    for (n, inst) in [(2, sl2_grassmann()), (3, affine_zeta())] {
        let fam = higher_derived_family(&inst).map_err(usage)?;
        let rep = invariant_cocycle_check(&inst.alg, &fam, n).map_err(usage)?;
        let label = format!("invariance n={n} on {}", inst.alg.name);
        r.check(&label, rep.zero);
        r.line(format!("{label}: {} words, {}", rep.words, if rep.zero { "zero" } else { "NONZERO" }));
        if let Some(w) = rep.witness {
            r.witnesses.push(format!("{}: {} ↦ {}", w.law, w.word, w.residual));
        }
    }
    for n in 1..max_arity {
        let rep = invariant_identity_formal(n, FormalFamily::HigherDerived);
        r.check(format!("formal invariance n={n}"), rep.pass);
        if let Some(w) = rep.witness {
            r.witnesses.push(format!("formal n={n}: {w}"));
        }
    }
    let alg = sl2_trace_form();
    let cartan = cartan_cocycle_check(&alg).map_err(usage)?;
    r.check(format!("cartan cocycle on {}", alg.name), cartan.axioms_pass && cartan.cocycle.zero);
    r.line(format!(
        "cartan on {}: {} words, {}",
        alg.name,
        cartan.cocycle.words,
        if cartan.cocycle.zero { "zero" } else { "NONZERO" }
    ));
    let verdict = r.status;
    r.line(format!("check-sh: {verdict}"));
    Ok(r)
}

fn appendix(max_arity: usize) -> Result<Report, UsageError> {
    if !(2..=12).contains(&max_arity) {
        return Err(UsageError("--max-arity must lie in 2..=12".into()));
    }
    let mut r = Report::new(format!("verify-appendix --max-arity {max_arity}"));
    for m in 1..=max_arity {
        for i in 0..m {
            let s = derived_homotopy_sign(m, i).map_err(usage)?;
            r.signs.insert(format!("(±)^{i}_{m}"), s.to_i64().into());
        }
    }
    let a1 = a1_ledger(max_arity);
    let bad1: Vec<_> = a1.iter().filter(|e| !(e.steps_hold && e.z == -e.y)).collect();
    r.dim("A1 rows", a1.len());
    r.check("A1: each step holds and the two terms differ by -1", bad1.is_empty());
    for e in &bad1 {
        r.witnesses.push(format!("A1 m={} n={} i={} j={} p={}: y={} z={}", e.m, e.n, e.i, e.j, e.p, e.y, e.z));
    }
    for e in &a1 {
        r.signs.insert(format!("A1 m={} n={} i={} j={} p={}", e.m, e.n, e.i, e.j, e.p), (e.z * e.y).into());
    }
    r.line(format!("A1: {} rows, {} failing", a1.len(), bad1.len()));
    let a2 = a2_ledger(max_arity);
    let bad2: Vec<_> = a2.iter().filter(|e| !e.holds()).collect();
    let literal = a2.iter().filter(|e| !e.literal_holds()).count();
    r.dim("A2 rows", a2.len());
    r.dim("A2 rows off with the literal exponent", literal);
    r.check("A2: factor (-1)^k", bad2.is_empty());
    for e in &bad2 {
        r.witnesses.push(format!("A2 m={} n={} i={} j={}: {} vs {}", e.m, e.n, e.i, e.j, e.lp3, e.lp7));
    }
    r.line(format!("A2: {} rows, {} failing; {literal} rows differ under (m-i-1)(m-3)/2", a2.len(), bad2.len()));
    let verdict = r.status;
    r.line(format!("verify-appendix: {verdict}"));
    Ok(r)
}

/// Read `--gens`: space-separated `GLYPH:name:degree[:swap]` entries.
///
/// `GLYPH` is `(,)`, `[,]` or one infix character. Without a swap field,
/// `lie` is antisymmetric in even degree, `com` symmetric in even degree, and
/// anything else has no symmetry.
pub fn parse_gens(spec: &str) -> Result<Signature, UsageError> {
    let mut fams = Vec::new();
    for tok in spec.split_whitespace() {
        let parts: Vec<&str> = tok.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(UsageError(format!("--gens entry `{tok}` is not GLYPH:name:degree")));
        }
        let glyph = match parts[0] {
            "(,)" => Glyph::Bracket { open: '(', close: ')' },
            "[,]" => Glyph::Bracket { open: '[', close: ']' },
            "." | "·" => Glyph::Infix('·'),
            "*" => Glyph::Infix('*'),
            "<>" | "◊" => Glyph::Infix('◊'),
            "|>" | "▹" => Glyph::Infix('▹'),
            other => return Err(UsageError(format!("unsupported product symbol `{other}`"))),
        };
        let degree: i64 = parts[2].parse().map_err(|_| UsageError(format!("bad degree in `{tok}`")))?;
        let even = degree % 2 == 0;
        let swap = match (parts.get(3).copied(), parts[1]) {
            (Some("sym"), _) => SwapKind::Symmetric,
            (Some("antisym"), _) => SwapKind::Antisymmetric,
            (Some("pair"), _) => SwapKind::Pair,
            (Some(other), _) => return Err(UsageError(format!("unknown symmetry `{other}`"))),
            (None, "lie") if even => SwapKind::Antisymmetric,
            (None, "lie") => SwapKind::Symmetric,
            (None, "com") if even => SwapKind::Symmetric,
            (None, "com") => SwapKind::Antisymmetric,
            (None, _) => SwapKind::Pair,
        };
        fams.push(Generator::new(parts[1], degree, swap, glyph));
    }
    if fams.is_empty() {
        return Err(UsageError("--gens is empty".into()));
    }
    let sig = Signature::new(fams);
    sig.validate().map_err(usage)?;
    Ok(sig)
}

fn parse(text: &str, operad: &str, gens: Option<&str>) -> Result<Report, UsageError> {
    let mut r = Report::new(format!("parse {text}"));
    match gens {
        Some(spec) => {
            let sig = parse_gens(spec)?;
            let table = SymbolTable::for_signature(&sig);
            let e = parse_with(text, &table, &sig).map_err(|e| UsageError(format!("cannot parse\n{}", e.render(text))))?;
            r.dim("arity", e.arity);
            r.dim("terms", e.terms.len());
            r.line(format_element(&e, &sig));
        }
        None => {
            let p = presentation(operad).map_err(usage)?;
            let e = parse_relation(text, &p.sig).map_err(|e| UsageError(format!("cannot parse\n{}", e.render(text))))?;
            r.dim("arity", e.arity);
            r.dim("terms", e.terms.len());
            r.line(format_element(&e, &p.sig));
            if (3..=5).contains(&e.arity) {
                let holds = holds_in(&p, &e).map_err(usage)?;
                r.signs.insert(format!("holds in {operad}"), holds.into());
                r.line(format!("holds in {operad}: {}", if holds { "yes" } else { "no" }));
            }
        }
    }
    Ok(r)
}
