//! One function per subcommand. Each returns the payload, a text
//! rendering and the exit code.

use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};
use trmod_core::classify::classify_ut2;
use trmod_core::ext::{ext1, pushout_middle};
use trmod_core::filtration::{filtrate_ut, find_ut_form, mb_matrix, UtSearch};
use trmod_core::io::{
    parse_matrix, ExtJson, FiltrationJson, MatrixJson, TrJson, UtSearchJson, WitnessJson,
};
use trmod_core::modmat::{is_equivalent, is_indecomposable, Indecomposability, PresentationMatrix};
use trmod_core::totref::{check_totally_reflexive, TrOptions, Verdict};
use trmod_core::{AlgebraSpec, Error, GradedLocalAlgebra, RingElement};

use crate::report::{
    Failure, Inputs, MatrixInput, Outcome, RingInput, INCONCLUSIVE, REFUTED, SUCCESS,
};
use crate::{Cli, Command, RingCommand};

type Run = Result<Outcome, Failure>;

struct Ctx<'a> {
    cli: &'a Cli,
    inputs: &'a mut Inputs,
    warnings: &'a mut Vec<String>,
}

impl Ctx<'_> {
    fn ring(&mut self, source: &str) -> Result<GradedLocalAlgebra, Failure> {
        let spec = if source.starts_with("S:") {
            AlgebraSpec::builtin(source).ok_or_else(|| {
                Failure::input(format!("bad built-in ring `{source}`; use S:<prime>"))
            })?
        } else {
            let text = fs::read_to_string(source)
                .map_err(|e| Failure::input(format!("cannot read {source}: {e}")))?;
            AlgebraSpec::from_json(&text)?
        };
        let ring = GradedLocalAlgebra::build(&spec)?;
        if ring.is_gorenstein() && !self.cli.allow_gorenstein {
            self.warnings.push(
                "the ring is Gorenstein; results for non-Gorenstein rings do not apply \
                 (pass --allow-gorenstein to silence)"
                    .into(),
            );
        }
        self.inputs.ring = Some(RingInput {
            source: source.into(),
            spec,
        });
        Ok(ring)
    }

    fn matrix(
        &mut self,
        ring: &GradedLocalAlgebra,
        source: &str,
    ) -> Result<PresentationMatrix, Failure> {
        let text = fs::read_to_string(source)
            .map_err(|e| Failure::input(format!("cannot read {source}: {e}")))?;
        let m = parse_matrix(ring, &text)?;
        self.inputs.matrices.push(MatrixInput {
            source: source.into(),
            matrix: MatrixJson::from_matrix(ring, &m),
        });
        Ok(m)
    }

    fn element(
        &mut self,
        ring: &GradedLocalAlgebra,
        name: &str,
        src: &str,
    ) -> Result<RingElement, Failure> {
        let a = ring.parse(src)?;
        self.inputs
            .parameters
            .insert(name.into(), Value::String(ring.format(&a)));
        Ok(a)
    }

    fn param(&mut self, name: &str, v: Value) {
        self.inputs.parameters.insert(name.into(), v);
    }
}

pub fn run(cli: &Cli, inputs: &mut Inputs, warnings: &mut Vec<String>) -> Run {
    let mut ctx = Ctx {
        cli,
        inputs,
        warnings,
    };
    match &cli.command {
        Command::Ring(RingCommand::Check { ring }) => ring_check(&mut ctx, ring),
        Command::Ezd { ring } => ezd(&mut ctx, ring),
        Command::Tr {
            ring,
            matrix,
            depth,
        } => tr(&mut ctx, ring, matrix, *depth),
        Command::Ext { ring, n, m } => ext(&mut ctx, ring, n, m),
        Command::Pushout { ring, u, v, alpha } => pushout(&mut ctx, ring, u, v, alpha),
        Command::Filtrate { ring, matrix } => filtrate(&mut ctx, ring, matrix),
        Command::Classify { ring, size } => classify(&mut ctx, ring, *size),
        Command::Mb {
            ring,
            b,
            s,
            t,
            u,
            v,
        } => mb(&mut ctx, ring, *b, [s, t, u, v]),
        Command::Equiv { ring, m1, m2 } => equiv(&mut ctx, ring, m1, m2),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn show(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("  ({}x{} matrix)\n", m.rows(), m.cols());
    }
    m.display(ring)
        .to_string()
        .lines()
        .map(|l| format!("  {l}\n"))
        .collect()
}

fn ring_check(ctx: &mut Ctx, source: &str) -> Run {
    let ring = ctx.ring(source)?;
    let rep = ring.ring_preconditions();
    let mut human = String::new();
    let _ = writeln!(human, "characteristic      {}", rep.characteristic);
    let _ = writeln!(human, "variables           {}", rep.variables.join(", "));
    let _ = writeln!(human, "hilbert series      {:?}", rep.hilbert_series);
    let _ = writeln!(human, "length              {}", rep.length);
    let _ = writeln!(human, "embedding dimension {}", rep.embedding_dimension);
    let _ = writeln!(human, "socle dimension     {}", rep.socle_dimension);
    let _ = writeln!(human, "socle = m^2         {}", rep.socle_equals_m2);
    let _ = writeln!(human, "gorenstein          {}", rep.gorenstein);
    let _ = writeln!(
        human,
        "admits nontrivial TR modules: {}",
        rep.admits_nontrivial_tr
    );
    for n in &rep.notes {
        let _ = writeln!(human, "note: {n}");
    }
    let (exit, status) = if rep.admits_nontrivial_tr {
        (SUCCESS, "conditions_hold")
    } else {
        (REFUTED, "conditions_fail")
    };
    Ok(Outcome {
        exit,
        status,
        result: to_value(&rep),
        human,
    })
}

fn ezd(ctx: &mut Ctx, source: &str) -> Run {
    let ring = ctx.ring(source)?;
    let pairs = ring.enumerate_ezd()?;
    let list: Vec<Value> = pairs
        .iter()
        .map(|p| json!({ "a": ring.format(p.a()), "partner": ring.format(p.b()) }))
        .collect();
    let mut human = String::new();
    for p in &pairs {
        let _ = writeln!(
            human,
            "{}  (partner {})",
            ring.format(p.a()),
            ring.format(p.b())
        );
    }
    let _ = writeln!(human, "{} exact zero divisors up to units", pairs.len());
    Ok(Outcome {
        exit: SUCCESS,
        status: "ok",
        result: json!({ "count": pairs.len(), "pairs": list }),
        human,
    })
}

fn tr(ctx: &mut Ctx, source: &str, matrix: &str, depth: usize) -> Run {
    let ring = ctx.ring(source)?;
    let m = ctx.matrix(&ring, matrix)?;
    ctx.param("depth", json!(depth));
    let opts = TrOptions {
        depth,
        budget: ctx.cli.budget,
    };
    let cert = check_totally_reflexive(&ring, &m, opts)?;
    let replayed = cert.verify(&ring);
    let payload = TrJson::new(&ring, &cert);
    let mut human = String::new();
    let (exit, status) = match &cert.verdict {
        Verdict::Certified(w) => {
            let _ = writeln!(
                human,
                "certified totally reflexive: preperiod {}, period {}, betti {}, free rank {}",
                w.preperiod_length(),
                w.period_length(),
                w.betti,
                w.free_rank
            );
            for (k, d) in w.preperiod.iter().enumerate() {
                let _ = write!(human, "d{} (preperiod)\n{}", k + 1, show(&ring, d));
            }
            for (k, d) in w.period.iter().enumerate() {
                let _ = write!(
                    human,
                    "d{} (period)\n{}",
                    w.preperiod_length() + k + 1,
                    show(&ring, d)
                );
            }
            (SUCCESS, "certified")
        }
        Verdict::Refuted(r) => {
            let _ = writeln!(human, "not totally reflexive: {r:?}");
            (REFUTED, "refuted")
        }
        Verdict::Inconclusive { depth } => {
            let _ = writeln!(human, "inconclusive after {depth} differentials");
            (INCONCLUSIVE, "inconclusive")
        }
    };
    let _ = writeln!(human, "certificate replays: {replayed}");
    Ok(Outcome {
        exit,
        status,
        result: json!({ "certificate": to_value(&payload), "replays": replayed }),
        human,
    })
}

fn cyclic_ezd(ring: &GradedLocalAlgebra, m: &PresentationMatrix) -> bool {
    m.shape() == (1, 1) && ring.is_exact_zero_divisor(m.get(0, 0))
}

fn ext(ctx: &mut Ctx, source: &str, n_src: &str, m_src: &str) -> Run {
    let ring = ctx.ring(source)?;
    let n = ctx.matrix(&ring, n_src)?;
    let m = ctx.matrix(&ring, m_src)?;
    let space = ext1(&ring, &n, &m)?;
    let payload = ExtJson::new(&ring, &space);
    let cyclic = cyclic_ezd(&ring, &n) && cyclic_ezd(&ring, &m);
    let mut human = String::new();
    let _ = writeln!(human, "rank Ext^1(coker N, coker M) = {}", space.rank());
    let _ = writeln!(human, "classes with a unit lift span {}", space.unit_rank());
    if cyclic {
        let _ = writeln!(human, "gamma = {}", space.gamma());
    }
    for (k, c) in space.basis.iter().enumerate() {
        let _ = write!(human, "class {}\n{}", k + 1, show(&ring, &c.lift));
    }
    let mut result = to_value(&payload);
    if !cyclic {
        result["gamma"] = Value::Null;
    }
    Ok(Outcome {
        exit: SUCCESS,
        status: "ok",
        result,
        human,
    })
}

fn pushout(ctx: &mut Ctx, source: &str, u: &str, v: &str, alpha: &str) -> Run {
    let ring = ctx.ring(source)?;
    let u = ctx.element(&ring, "u", u)?;
    let v = ctx.element(&ring, "v", v)?;
    let alpha = ctx.element(&ring, "alpha", alpha)?;
    let mid = pushout_middle(&ring, &u, &v, &alpha)?;
    let min = trmod_core::modmat::minimize(&ring, &mid);
    let mut human = String::new();
    let _ = write!(human, "middle term\n{}", show(&ring, &mid));
    let _ = write!(human, "minimized\n{}", show(&ring, &min));
    Ok(Outcome {
        exit: SUCCESS,
        status: "ok",
        result: json!({
            "middle": MatrixJson::from_matrix(&ring, &mid),
            "minimized": MatrixJson::from_matrix(&ring, &min),
        }),
        human,
    })
}

fn filtrate(ctx: &mut Ctx, source: &str, matrix: &str) -> Run {
    let ring = ctx.ring(source)?;
    let m = ctx.matrix(&ring, matrix)?;
    let search = find_ut_form(&ring, &m, ctx.cli.budget)?;
    let search_json = to_value(&UtSearchJson::new(&ring, &search));
    let mut human = String::new();
    let form = match &search {
        UtSearch::NoneExists {
            scalar_pairs_covered,
            ..
        } => {
            let _ = writeln!(
                human,
                "no UT form exists (exhaustive over {scalar_pairs_covered} scalar pairs)"
            );
            return Ok(Outcome {
                exit: REFUTED,
                status: "no_ut_form",
                result: json!({ "search": search_json }),
                human,
            });
        }
        UtSearch::Found { form, .. } => form,
    };
    let _ = write!(human, "upper triangular form\n{}", show(&ring, form));
    match filtrate_ut(&ring, form) {
        Ok(f) => {
            let _ = writeln!(human, "lengths {:?}", f.lengths);
            for (k, q) in f.quotients.iter().enumerate() {
                let _ = writeln!(human, "T{}/T{} = S/({})", k + 1, k, ring.format(q));
            }
            Ok(Outcome {
                exit: SUCCESS,
                status: "filtered",
                result: json!({
                    "search": search_json,
                    "filtration": to_value(&FiltrationJson::new(&ring, &f)),
                }),
                human,
            })
        }
        Err(e @ Error::NotExactZeroDivisor { .. }) => {
            let _ = writeln!(human, "no filtration: {e}");
            Ok(Outcome {
                exit: REFUTED,
                status: "not_totally_reflexive",
                result: json!({ "search": search_json, "error": e.to_string() }),
                human,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn classify(ctx: &mut Ctx, source: &str, size: usize) -> Run {
    let ring = ctx.ring(source)?;
    ctx.param("size", json!(size));
    if size != 2 {
        return Err(Failure::input(format!(
            "classification supports --size 2, got {size}"
        )));
    }
    let table = classify_ut2(&ring, ctx.cli.budget)?;
    Ok(Outcome {
        exit: SUCCESS,
        status: "ok",
        result: to_value(&table.to_json(&ring)),
        human: table.render_grid(&ring),
    })
}

fn mb(ctx: &mut Ctx, source: &str, b: usize, names: [&String; 4]) -> Run {
    let ring = ctx.ring(source)?;
    ctx.param("b", json!(b));
    let [s, t, u, v] = names;
    let s = ctx.element(&ring, "s", s)?;
    let t = ctx.element(&ring, "t", t)?;
    let u = ctx.element(&ring, "u", u)?;
    let v = ctx.element(&ring, "v", v)?;
    let (m, pre) = mb_matrix(&ring, b, &s, &t, &u, &v)?;
    let opts = TrOptions {
        budget: ctx.cli.budget,
        ..TrOptions::default()
    };
    let cert = check_totally_reflexive(&ring, &m, opts)?;
    let indec = is_indecomposable(&ring, &m, ctx.cli.budget)?;
    let mut human = String::new();
    let _ = write!(human, "M_{b}\n{}", show(&ring, &m));
    let _ = writeln!(human, "hypotheses hold: {}", pre.preconditions_hold());
    for w in &pre.warnings {
        let _ = writeln!(human, "note: {w}");
    }
    let (exit, status) = match (&cert.verdict, indec.is_indecomposable()) {
        (Verdict::Certified(w), true) => {
            let _ = writeln!(
                human,
                "certified totally reflexive with constant betti number {}, indecomposable",
                w.betti
            );
            (SUCCESS, "certified")
        }
        (Verdict::Certified(_), false) => {
            let _ = writeln!(human, "certified totally reflexive but decomposable");
            (REFUTED, "decomposable")
        }
        (Verdict::Refuted(r), _) => {
            let _ = writeln!(human, "not totally reflexive: {r:?}");
            (REFUTED, "refuted")
        }
        (Verdict::Inconclusive { depth }, _) => {
            let _ = writeln!(human, "inconclusive after {depth} differentials");
            (INCONCLUSIVE, "inconclusive")
        }
    };
    let indecomposability = match &indec {
        Indecomposability::Indecomposable { end_top_dim } => {
            json!({ "indecomposable": true, "end_top_dim": end_top_dim })
        }
        Indecomposability::Decomposable { idempotent } => {
            json!({ "indecomposable": false, "idempotent": idempotent.row_major() })
        }
        Indecomposability::Zero => json!({ "indecomposable": false, "zero": true }),
    };
    Ok(Outcome {
        exit,
        status,
        result: json!({
            "matrix": MatrixJson::from_matrix(&ring, &m),
            "preconditions": to_value(&pre),
            "certificate": to_value(&TrJson::new(&ring, &cert)),
            "indecomposability": indecomposability,
        }),
        human,
    })
}

fn equiv(ctx: &mut Ctx, source: &str, m1: &str, m2: &str) -> Run {
    let ring = ctx.ring(source)?;
    let a = ctx.matrix(&ring, m1)?;
    let b = ctx.matrix(&ring, m2)?;
    let mut human = String::new();
    match is_equivalent(&ring, &a, &b, ctx.cli.budget)? {
        Some(w) => {
            let _ = write!(
                human,
                "equivalent: P·M1·Q = M2 with\nP\n{}Q\n{}",
                show(&ring, &w.p),
                show(&ring, &w.q)
            );
            Ok(Outcome {
                exit: SUCCESS,
                status: "equivalent",
                result: json!({ "equivalent": true, "witness": to_value(&WitnessJson::new(&ring, &w)) }),
                human,
            })
        }
        None => {
            let _ = writeln!(human, "not equivalent (exhaustive)");
            Ok(Outcome {
                exit: REFUTED,
                status: "not_equivalent",
                result: json!({ "equivalent": false }),
                human,
            })
        }
    }
}
