use std::path::PathBuf;

use clap::{Args, ValueEnum};
use multinet::circular::{classify_multi_circular, CanonicalKind};
use multinet::congruences::classify_congruence;
use multinet::conical::{polarize_spherical, GaussClass};
use multinet::io::{to_json_string, Meta, NetData, NetDocument};
use multinet::projective::{EPoint, QuadricForm};
use multinet::quadric_nets::generate_by_reflections;
use multinet::samples::{self, MoebiusMap, Torus};
use multinet::subdivision::{adapted_cyclide_patch, CircArc};
use rand::Rng;

use crate::{emit, Fatal, Outcome};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Translation net in RP3 (multi-Q).
    Translation,
    /// Net generated by two commuting families of Möbius reflections (R41).
    Reflect,
    Rotational,
    Cone,
    Cylinder,
    /// Multi-Q-net with planar parameter polygons.
    Qqstar,
    /// Dupin cyclide patch on one quad of a torus.
    CyclidePatch,
    /// Line grid of contact elements (lie) or of hyperboloid rulings (pluecker).
    Congruence,
    /// Multi-conical plane net polar to a spherical net.
    Conical,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Model {
    Lie,
    Pluecker,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SphereClass {
    Revolution,
    Stereographic,
    Strip,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices along the first index.
    #[arg(long, default_value_t = 5)]
    nu: usize,
    /// Vertices along the second index.
    #[arg(long, default_value_t = 5)]
    nv: usize,
    /// Profile points of rotational, cone and cylinder nets.
    #[arg(long, default_value_t = 5)]
    profile_len: usize,
    /// Rotation angles (scale factors, offsets) of rotational, cone and
    /// cylinder nets.
    #[arg(long, default_value_t = 8)]
    angles: usize,
    /// Move rotational, cone and cylinder nets by a random sphere inversion
    /// and similarity.
    #[arg(long)]
    moebius: bool,
    /// Segments per side of a cyclide patch.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Torus radii of a cyclide patch.
    #[arg(long, default_value_t = 2.0)]
    big: f64,
    #[arg(long, default_value_t = 0.7)]
    small: f64,
    #[arg(long, value_enum, default_value = "lie")]
    model: Model,
    /// Gauss map class of a conical net.
    #[arg(long, value_enum, default_value = "revolution")]
    class: SphereClass,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn at_least(name: &str, value: usize, min: usize) -> Outcome<()> {
    if value < min {
        return Err(Fatal(format!("--{name} must be at least {min}, got {value}")));
    }
    Ok(())
}

fn cyclide_patch(args: &GenArgs, rng: &mut impl Rng) -> Outcome<NetData> {
    at_least("n", args.n, 1)?;
    if !(args.small > 0.0 && args.big > args.small && args.big.is_finite()) {
        return Err(Fatal("torus radii need big > small > 0".into()));
    }
    let torus = Torus { big: args.big, small: args.small };
    let (u0, v0) = (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0));
    let (u1, v1) = (u0 + rng.gen_range(0.3..0.6), v0 + rng.gen_range(0.4..0.9));
    let quad = [(u0, v0), (u1, v0), (u0, v1), (u1, v1)].map(|(u, v)| EPoint::Finite(torus.point(u, v)));
    let p0 = CircArc::new(torus.point(u0, v0), torus.point(u1, v0), torus.du(u0, v0))?;
    let q0 = CircArc::new(torus.point(u0, v0), torus.point(u0, v1), torus.dv(u0, v0))?;
    Ok(NetData::Euclid(adapted_cyclide_patch(&quad, &p0, &q0, args.n, args.n)?))
}

pub fn run(args: &GenArgs) -> Outcome<()> {
    let mut rng = samples::rng(args.seed);
    let rng = &mut rng;
    let mut classification = None;
    let name = args.kind.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    if !matches!(
        args.kind,
        GenKind::Rotational | GenKind::Cone | GenKind::Cylinder | GenKind::CyclidePatch
    ) {
        at_least("nu", args.nu, 2)?;
        at_least("nv", args.nv, 2)?;
    }
    let net = match args.kind {
        GenKind::Rotational | GenKind::Cone | GenKind::Cylinder => {
            at_least("profile-len", args.profile_len, 2)?;
            at_least("angles", args.angles, 2)?;
            let kind = match args.kind {
                GenKind::Rotational => CanonicalKind::Rotational,
                GenKind::Cone => CanonicalKind::Cone,
                _ => CanonicalKind::Cylinder,
            };
            let mut net = samples::random_canonical(rng, kind, args.angles, args.profile_len)?;
            if args.moebius {
                net = MoebiusMap::random(rng).apply(&net)?;
            }
            if args.angles >= 3 && args.profile_len >= 3 {
                classification = Some(classify_multi_circular(&net)?.class.to_string());
            }
            NetData::Euclid(net)
        }
        GenKind::Translation => NetData::Points(samples::random_translation_net(rng, args.nu, args.nv)?),
        GenKind::Reflect => {
            let fam = samples::random_mirror_families(rng, args.nu - 1, args.nv - 1)?;
            NetData::Points(generate_by_reflections(&QuadricForm::moebius(), &fam.n1, &fam.n2, &fam.x00)?)
        }
        GenKind::Qqstar => NetData::Points(samples::random_qqstar(rng, args.nu, args.nv)?),
        GenKind::CyclidePatch => cyclide_patch(args, rng)?,
        GenKind::Congruence => {
            let g = match args.model {
                Model::Lie => samples::random_torus_congruence(rng, args.nu, args.nv)?,
                Model::Pluecker => samples::random_hyperboloid(rng, args.nu, args.nv)?,
            };
            classification = Some(classify_congruence(&g)?.class.to_string());
            NetData::Lines(g)
        }
        GenKind::Conical => {
            let class = match args.class {
                SphereClass::Revolution => GaussClass::Revolution,
                SphereClass::Stereographic => GaussClass::StereographicGrid,
                SphereClass::Strip => GaussClass::SymmetricStrip,
            };
            let s = samples::random_spherical(rng, class, args.nu, args.nv);
            classification = Some(class.to_string());
            NetData::Planes(polarize_spherical(&s)?)
        }
    };
    let meta = Meta {
        seed: Some(args.seed),
        generator: Some(name),
        classification,
    };
    emit(&args.out, &to_json_string(&NetDocument::with_meta(net, meta))?)
}
