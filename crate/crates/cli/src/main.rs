use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gpdcalc::bibundle::{compose, Bibundle};
use gpdcalc::category::FiniteCategory;
use gpdcalc::descent::glue;
use gpdcalc::doc::{DocError, Document};
use gpdcalc::fingpd::{orbit_space, FiniteGroupoid};
use gpdcalc::graphtop::circle_demo;
use gpdcalc::morita::{hs_hom_classes, localize_symbolic, morita_equivalent, skeleton_hom_count, HS_BOUND};

#[derive(Parser)]
#[command(name = "gpdcalc", version, about = "Exact computations with finite groupoids")]
struct Cli {
    /// Write the resulting document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap for exhaustive searches.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and check its axioms.
    Validate { path: PathBuf },
    /// Orbits and isotropy groups of a groupoid.
    Info { path: PathBuf },
    /// Compose bibundles (or functors) `P: G -> H` and `Q: H -> K`.
    Compose { p: PathBuf, q: PathBuf },
    /// Decide Morita equivalence, with a biprincipal witness.
    Morita { g: PathBuf, h: PathBuf },
    /// Isomorphism classes of bibundles `G -> H`.
    Hs { g: PathBuf, h: PathBuf },
    /// Glue a descent datum into a bundle over the base.
    Glue { datum: PathBuf },
    /// Localize a category at the named arrows.
    Localize {
        path: PathBuf,
        w: Vec<String>,
        /// Longest path considered when listing normal forms.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// The two-arc cover of the cycle graph C_n over Z/2.
    DemoCircle { n: usize },
}

/// Exit status 1 for semantic failures and 2 for unreadable input.
enum Failure {
    Semantic(String),
    Input(String),
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

fn semantic(e: impl std::fmt::Display) -> Failure {
    Failure::Semantic(e.to_string())
}

fn read(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Document::parse(&text)?)
}

fn read_groupoid(path: &Path) -> Result<Arc<FiniteGroupoid>, Failure> {
    Ok(read(path)?.groupoid()?.into_arc())
}

struct Output {
    format: Format,
    out: Option<PathBuf>,
}

impl Output {
    fn report(&self, text: String, value: Value) {
        match self.format {
            Format::Text => print!("{text}"),
            Format::Structured => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
        }
    }

    fn document(&self, doc: &Document, summary: String) -> Result<(), Failure> {
        match &self.out {
            Some(path) => {
                fs::write(path, doc.to_text()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                print!("{summary}");
            }
            None => print!("{}", doc.to_text()),
        }
        Ok(())
    }
}

fn doc_value(doc: &Document) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn validate(path: &Path, o: &Output) -> Result<(), Failure> {
    let doc = read(path)?;
    let checked: Result<String, Failure> = match &doc {
        Document::Groupoid(raw) => match FiniteGroupoid::from_raw(raw) {
            Ok(g) => Ok(format!("{} objects, {} arrows", g.object_count(), g.arrow_count())),
            Err(e) => {
                let lines: Vec<String> = e.violations.iter().map(|v| v.to_string()).collect();
                Err(Failure::Semantic(lines.join("\n")))
            }
        },
        Document::Functor(r) => r.build().map(|f| format!("{} arrows mapped", f.arr_map().len())).map_err(Failure::from),
        Document::Bibundle(r) => r.build().map(|b| format!("{} points", b.point_count())).map_err(Failure::from),
        Document::Cover(r) => r.build().map(|c| format!("{} pieces", c.piece_count())).map_err(Failure::from),
        Document::Bundle(r) => r.build().map(|b| format!("{} points", b.point_count())).map_err(Failure::from),
        Document::Descent(r) => r
            .build()
            .map_err(Failure::from)
            .and_then(|d| match gpdcalc::descent::check_cocycle(&d) {
                Ok(()) => Ok(format!("{} pieces, cocycle condition holds", d.cover().piece_count())),
                Err(v) => Err(semantic(v)),
            }),
        Document::Graph(r) => r.build().map(|g| format!("{} vertices, {} edges", g.vertex_count(), g.edge_count())).map_err(Failure::from),
        Document::Cocycle(r) => r.build().map(|c| format!("{} labels", c.labels().len())).map_err(Failure::from),
        Document::Category(r) => FiniteCategory::from_raw(r)
            .map(|c| format!("{} objects, {} arrows", c.object_count(), c.arrow_count()))
            .map_err(semantic),
    };
    match checked {
        Ok(summary) => {
            o.report(
                format!("valid {}: {summary}\n", doc.kind()),
                json!({"valid": true, "kind": doc.kind(), "summary": summary}),
            );
            Ok(())
        }
        Err(Failure::Semantic(msg)) => {
            o.report(
                format!("invalid {}:\n{msg}\n", doc.kind()),
                json!({"valid": false, "kind": doc.kind(), "diagnostics": msg.lines().collect::<Vec<_>>()}),
            );
            Err(Failure::Semantic(String::new()))
        }
        Err(e) => Err(e),
    }
}

fn info(path: &Path, o: &Output) -> Result<(), Failure> {
    let g = read_groupoid(path)?;
    let orbits = orbit_space(&g);
    let n = orbits.class_count();
    let groups: Vec<String> = orbits.isotropy.iter().map(|i| i.group.describe()).collect();
    let mut text = format!("{n} orbit{}", if n == 1 { "" } else { "s" });
    if n == 1 {
        text += &format!(", isotropy {}", groups[0]);
    }
    text.push('\n');
    for iso in &orbits.isotropy {
        text += &format!(
            "orbit of {}: isotropy {} (order {})\n",
            g.object_name(iso.representative),
            iso.group.describe(),
            iso.group.order()
        );
    }
    text += &format!(
        "proper: {}; etale: {} (trivially true in finite setting)\n",
        g.is_proper(),
        g.is_etale()
    );
    let value = json!({
        "orbits": n,
        "isotropy": orbits.isotropy.iter().map(|iso| json!({
            "representative": g.object_name(iso.representative),
            "group": iso.group.describe(),
            "order": iso.group.order(),
        })).collect::<Vec<_>>(),
        "proper": g.is_proper(),
        "etale": g.is_etale(),
    });
    o.report(text, value);
    Ok(())
}

fn compose_cmd(p: &Path, q: &Path, o: &Output) -> Result<(), Failure> {
    let (p, q): (Bibundle, Bibundle) = (read(p)?.bibundle()?, read(q)?.bibundle()?);
    let pq = compose(&p, &q).map_err(semantic)?;
    let doc = Document::from(&pq);
    o.document(&doc, format!("composite: {} points\n", pq.point_count()))
}

fn morita_cmd(g: &Path, h: &Path, o: &Output) -> Result<(), Failure> {
    let (g, h) = (read_groupoid(g)?, read_groupoid(h)?);
    let v = morita_equivalent(&g, &h);
    let mut text = format!("Morita equivalent: {}\n", if v.equivalent { "yes" } else { "no" });
    if let Some(m) = &v.orbit_matching {
        let (og, oh) = (orbit_space(&g), orbit_space(&h));
        for (i, &j) in m.iter().enumerate() {
            text += &format!(
                "orbit of {} <-> orbit of {} ({})\n",
                g.object_name(og.isotropy[i].representative),
                h.object_name(oh.isotropy[j].representative),
                og.isotropy[i].group.describe()
            );
        }
    }
    if let Some(e) = &v.skipped {
        text += &format!("witness skipped: {e}\n");
    }
    let witness = v.witness.as_ref().map(|w| Document::from(&w.bibundle));
    if let Some(doc) = &witness {
        text += "witness bibundle:\n";
        text += &doc.to_text();
    }
    let value = json!({
        "equivalent": v.equivalent,
        "orbit_matching": v.orbit_matching,
        "witness": witness.as_ref().map(doc_value),
        "skipped": v.skipped.as_ref().map(|e| e.to_string()),
    });
    o.report(text, value);
    Ok(())
}

fn hs_cmd(g: &Path, h: &Path, cap: usize, o: &Output) -> Result<(), Failure> {
    let (g, h) = (read_groupoid(g)?, read_groupoid(h)?);
    let classes = hs_hom_classes(&g, &h, cap).map_err(semantic)?;
    let oracle = skeleton_hom_count(&g, &h);
    let n = classes.len();
    let mut text = format!("{n} class{}\n", if n == 1 { "" } else { "es" });
    text += &format!("conjugacy-class count: {oracle}\n");
    for (i, b) in classes.iter().enumerate() {
        let g = b.left_groupoid();
        let moves: Vec<String> = (0..b.point_count())
            .flat_map(|p| {
                b.left_action()
                    .acting_arrows(p)
                    .filter(|&a| !g.is_unit(a))
                    .map(move |a| (a, p))
                    .collect::<Vec<_>>()
            })
            .map(|(a, p)| {
                let q = b.act_left(a, p).expect("acting arrow");
                format!("{}.{}={}", g.arrow_name(a), b.point_name(p), b.point_name(q))
            })
            .collect();
        text += &format!("class {}: points {}; left action {}\n", i + 1, b.point_names().join(" "), if moves.is_empty() { "trivial".to_string() } else { moves.join(" ") });
    }
    let value = json!({
        "classes": classes.len(),
        "oracle": oracle,
        "representatives": classes.iter().map(|b| doc_value(&Document::from(b))).collect::<Vec<_>>(),
    });
    o.report(text, value);
    Ok(())
}

fn glue_cmd(path: &Path, o: &Output) -> Result<(), Failure> {
    let doc = read(path)?;
    let Document::Descent(raw) = &doc else {
        return Err(semantic(format!("expected a descent document, found {}", doc.kind())));
    };
    let d = raw.build()?;
    let glued = glue(&d).map_err(semantic)?;
    let b = &glued.bundle;
    o.document(
        &Document::from(b),
        format!("glued bundle: {} points over {} base points\n", b.point_count(), b.base_size()),
    )
}

fn localize_cmd(path: &Path, w: &[String], max_len: usize, o: &Output) -> Result<(), Failure> {
    let doc = read(path)?;
    let c = match &doc {
        Document::Category(r) => FiniteCategory::from_raw(r).map_err(semantic)?,
        Document::Groupoid(_) => FiniteCategory::from_groupoid(&doc.groupoid()?),
        d => return Err(semantic(format!("expected a category document, found {}", d.kind()))),
    };
    let loc = localize_symbolic(c, w).map_err(semantic)?;
    let mut text = String::new();
    let mut inverses = Vec::new();
    for &a in loc.w() {
        let name = loc.category().arrow_name(a).to_string();
        let ok = loc.verify_inverse(a);
        text += &format!("{name}: two-sided inverse {}\n", if ok { "verified" } else { "FAILED" });
        inverses.push(json!({"w": name, "verified": ok}));
    }
    let c = loc.category();
    let mut homs = Vec::new();
    for x in c.objects() {
        for y in c.objects() {
            let forms: Vec<String> = loc.hom_normal_forms(x, y, max_len).iter().map(|f| loc.format_word(f)).collect();
            if !forms.is_empty() {
                text += &format!("{} -> {}: {}\n", c.object_name(x), c.object_name(y), forms.join("; "));
            }
            homs.push(json!({"source": c.object_name(x), "target": c.object_name(y), "normal_forms": forms}));
        }
    }
    let closed = loc.to_finite_category(max_len).is_ok();
    text += &format!(
        "normal forms up to length {max_len} {} closed under composition\n",
        if closed { "are" } else { "are not" }
    );
    o.report(text, json!({"inverses": inverses, "homs": homs, "closed": closed}));
    if inverses.iter().all(|v| v["verified"] == true) {
        Ok(())
    } else {
        Err(Failure::Semantic(String::new()))
    }
}

fn demo_cmd(n: usize, o: &Output) -> Result<(), Failure> {
    let r = circle_demo(n).map_err(semantic)?;
    let k = &r.group;
    let value = json!({
        "n": n,
        "global_classes": r.global_classes,
        "arc_classes": r.arc_classes,
        "obstruction": r.obstruction(),
        "holonomy": [k.name(r.holonomy.0), k.name(r.holonomy.1)],
        "arc_witnesses": r.arc_witnesses.iter().map(|t| t.values.iter().map(|&a| k.name(a)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "global_witness": r.global_witness.as_ref().map(|t| t.values.iter().map(|&a| k.name(a)).collect::<Vec<_>>()),
        "overlap": r.overlap.iter().map(|v| json!({
            "vertex": r.graph.vertex_name(v.vertex),
            "first": k.name(v.first),
            "second": k.name(v.second),
            "mismatch": k.name(v.mismatch),
        })).collect::<Vec<_>>(),
        "twisted": doc_value(&Document::from(&r.twisted)),
    });
    o.report(r.to_string(), value);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let o = Output {
        format: cli.format,
        out: cli.out,
    };
    match &cli.command {
        Command::Validate { path } => validate(path, &o),
        Command::Info { path } => info(path, &o),
        Command::Compose { p, q } => compose_cmd(p, q, &o),
        Command::Morita { g, h } => morita_cmd(g, h, &o),
        Command::Hs { g, h } => hs_cmd(g, h, cli.cap.unwrap_or(HS_BOUND), &o),
        Command::Glue { datum } => glue_cmd(datum, &o),
        Command::Localize { path, w, max_len } => localize_cmd(path, w, *max_len, &o),
        Command::DemoCircle { n } => demo_cmd(*n, &o),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
