use std::fmt::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use multinet::circular::{circular_violations, classify_multi_circular};
use multinet::congruences::{classify_congruence, congruence_violations};
use multinet::conical::{classify_gauss, gauss_map};
use multinet::io::NetData;
use multinet::net::{PlaneNet, Violation};
use multinet::projective::SubspaceSignature;
use multinet::qnets::{multi_q_violations, multi_qstar_violations, q_violations, qstar_violations};
use multinet::{Error, Exec};

use crate::{emit, input, Outcome};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Q,
    MultiQ,
    Qstar,
    MultiQstar,
    Circular,
    MultiCircular,
    Conical,
    MultiConical,
    Congruence,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ClassifyKind {
    Circular,
    Gauss,
    Congruence,
}

/// Conical nets fail either as Q*-nets or through their Gauss map.
fn conical_violations(pn: &PlaneNet, exhaustive: bool, exec: Exec) -> Outcome<Vec<Violation>> {
    let mut v = if exhaustive {
        multi_qstar_violations(pn, exec)
    } else {
        qstar_violations(pn, exec)
    };
    v.extend(circular_violations(&gauss_map(pn)?, exhaustive, exec));
    v.sort_by_key(|x| (x.i0, x.j0, x.i1, x.j1));
    v.dedup_by_key(|x| (x.i0, x.j0, x.i1, x.j1));
    Ok(v)
}

fn violations(check: Check, net: &NetData, exec: Exec) -> Outcome<Vec<Violation>> {
    Ok(match check {
        Check::Q => q_violations(&input::points(net)?, exec),
        Check::MultiQ => multi_q_violations(&input::points(net)?, exec),
        Check::Qstar => qstar_violations(&input::planes(net)?, exec),
        Check::MultiQstar => multi_qstar_violations(&input::planes(net)?, exec),
        Check::Circular => circular_violations(&input::euclid(net)?, false, exec),
        Check::MultiCircular => circular_violations(&input::euclid(net)?, true, exec),
        Check::Conical => conical_violations(&input::planes(net)?, false, exec)?,
        Check::MultiConical => conical_violations(&input::planes(net)?, true, exec)?,
        Check::Congruence => congruence_violations(&input::lines(net)?, exec),
    })
}

/// Returns whether the check passed.
pub fn verify(check: Check, path: &Option<PathBuf>, out: &Option<PathBuf>, max: usize, exec: Exec) -> Outcome<bool> {
    let doc = input::load(path)?;
    let found = violations(check, &doc.net, exec)?;
    let name = check.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    let (nu, nv) = doc.net.dims();
    let mut report = String::new();
    if found.is_empty() {
        let _ = writeln!(report, "{name}: pass ({nu}x{nv} net)");
    } else {
        let _ = writeln!(report, "{name}: FAIL, {} violation(s) in {nu}x{nv} net", found.len());
        for v in found.iter().take(max) {
            let _ = writeln!(report, "  {v}");
        }
        if found.len() > max {
            let _ = writeln!(report, "  ... {} more", found.len() - max);
        }
    }
    emit(out, &report)?;
    Ok(found.is_empty())
}

fn signature_line(label: &str, s: &SubspaceSignature) -> String {
    let eig: Vec<String> = s.eigenvalues.iter().map(|e| format!("{e:.6e}")).collect();
    format!(
        "{label}: dim {} signature (+{}, -{}, 0x{}) eigenvalues [{}]\n",
        s.dim,
        s.plus,
        s.minus,
        s.zero,
        eig.join(", ")
    )
}

pub fn classify(kind: ClassifyKind, path: &Option<PathBuf>, out: &Option<PathBuf>) -> Outcome<()> {
    let doc = input::load(path)?;
    let text = match kind {
        ClassifyKind::Circular => {
            let c = classify_multi_circular(&input::euclid(&doc.net)?)?;
            format!("class: {}\n{}{}", c.class, signature_line("span_u", &c.span_u), signature_line("span_v", &c.span_v))
        }
        ClassifyKind::Gauss => {
            let net = match &doc.net {
                NetData::Planes(pn) => gauss_map(pn)?,
                other => input::euclid(other)?,
            };
            let c = classify_gauss(&net)?;
            format!("class: {}\n{}{}", c.class, signature_line("span_u", &c.span_u), signature_line("span_v", &c.span_v))
        }
        ClassifyKind::Congruence => {
            match classify_congruence(&input::lines(&doc.net)?) {
                Ok(c) => format!(
                    "class: {}\n{}{}",
                    c.class,
                    signature_line("span_1", &c.span1),
                    signature_line("span_2", &c.span2)
                ),
                // all lines through one point or in one plane
                Err(Error::PlanarFamily) => "class: PlanarFamily\n".into(),
                Err(e) => return Err(e.into()),
            }
        }
    };
    emit(out, &text)
}
