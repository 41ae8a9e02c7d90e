//! Command-line grammar.

use std::path::PathBuf;

use catoptrics_core::anamorph::{AnamorphKind, SheetSize};
use catoptrics_core::units::{Angle, Length};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "catoptrics",
    version,
    about = "Anamorphs for cylindrical mirrors, caustics and the optics of looking into water",
    long_about = "Anamorphs for cylindrical mirrors, caustics and the optics of looking into water.\n\n\
                  Lengths take a unit suffix (m, cm, mm, in, ft) and angles take deg or rad.\n\
                  Diagnostics go to stderr as key=value lines; results go to stdout the same way."
)]
pub struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Scene file of `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a printable anamorph sheet from a picture.
    Anamorph(AnamorphArgs),
    /// Rays from a point or a parallel beam reflected inside a circle, and their caustic.
    #[command(name = "caustic2d")]
    Caustic2d(Caustic2dArgs),
    /// Primary rainbow: minimum deviation and the exit-angle histogram.
    Rainbow(RainbowArgs),
    /// Cross-sections of the tangential virtual surface inside the cylinder.
    VirtualSurface(VirtualSurfaceArgs),
    /// Simulated camera blur spot of a table point seen in the cylinder.
    BlurSpot(BlurSpotArgs),
    /// Apparent slope of a flat pool floor seen from the edge.
    Pool(PoolArgs),
    /// Apparent shape of a vertical ruler dipped in water.
    Ruler(RulerArgs),
    /// Where an underwater eye sees a target in the air.
    Archer(ArcherArgs),
}

/// Cylinder and observer, shared by the mirror subcommands.
#[derive(Debug, Args, Default, Clone)]
pub struct SceneArgs {
    /// Tube radius [default: 2.5cm].
    #[arg(long, value_name = "LEN")]
    pub radius: Option<Length>,
    /// Horizontal eye distance [default: 25cm].
    #[arg(long, value_name = "LEN")]
    pub eye_distance: Option<Length>,
    /// Eye height above the table [default: 40cm].
    #[arg(long, value_name = "LEN")]
    pub eye_height: Option<Length>,
    /// Whether the eye distance is measured from the mirror surface or the axis [default: surface].
    #[arg(long, value_enum, value_name = "FROM")]
    pub distance_from: Option<DistanceFrom>,
    /// Height of the tube [default: 25cm].
    #[arg(long, value_name = "LEN")]
    pub cylinder_height: Option<Length>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceFrom {
    Surface,
    Axis,
}

#[derive(Debug, Args)]
pub struct AnamorphArgs {
    /// Construction to use.
    #[arg(long, value_parser = parse_kind, default_value = "erect")]
    pub kind: AnamorphKind,
    /// Source picture (PNG, JPEG or PNM).
    #[arg(long, value_name = "FILE")]
    pub image: PathBuf,
    /// Output sheet; `.ppm` writes a PPM, anything else a PNG.
    #[arg(long, value_name = "FILE", default_value = "sheet.png")]
    pub out: PathBuf,
    /// Picture width as seen in the mirror [default: 4cm, 3cm for flat, or from --picture-height and the aspect].
    #[arg(long, value_name = "LEN")]
    pub picture_width: Option<Length>,
    /// Picture height [default: from the width and the picture's aspect].
    #[arg(long, value_name = "LEN")]
    pub picture_height: Option<Length>,
    /// Print resolution.
    #[arg(long, default_value_t = 300.0)]
    pub dpi: f64,
    #[arg(long, value_parser = parse_sheet, default_value = "a4")]
    pub sheet: SheetSize,
    #[command(flatten)]
    pub scene: SceneArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BeamKind {
    Point,
    Parallel,
}

#[derive(Debug, Args)]
pub struct Caustic2dArgs {
    /// Mirror radius [default: 2.5cm].
    #[arg(long, value_name = "LEN")]
    pub radius: Option<Length>,
    #[arg(long, value_enum, default_value = "point")]
    pub source: BeamKind,
    /// Distance of a point source from the centre [default: the radius, a source on the rim].
    #[arg(long, value_name = "LEN")]
    pub source_distance: Option<Length>,
    /// Direction the source lies in, or the beam comes from.
    #[arg(long, value_name = "ANGLE", default_value = "0deg")]
    pub source_azimuth: Angle,
    /// Reflected rays drawn.
    #[arg(long, default_value_t = 240, value_parser = clap::value_parser!(u32).range(1..))]
    pub rays: u32,
    /// Envelope samples.
    #[arg(long, default_value_t = 2001, value_parser = clap::value_parser!(u32).range(3..))]
    pub samples: u32,
    #[arg(long, value_name = "FILE", default_value = "caustic2d.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RainbowArgs {
    /// Refractive index of the drop.
    #[arg(long = "n", value_name = "INDEX", default_value_t = 1.333)]
    pub n: f64,
    /// Impact parameters in the histogram.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 120, value_parser = clap::value_parser!(u32).range(1..))]
    pub bins: u32,
    /// Upper end of the histogram.
    #[arg(long, value_name = "ANGLE", default_value = "60deg")]
    pub max_angle: Angle,
    /// Drop radius used for the figure.
    #[arg(long, value_name = "LEN", default_value = "1mm")]
    pub drop_radius: Length,
    /// Ray paths drawn in the figure.
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
    pub rays: u32,
    #[arg(long, value_name = "FILE", default_value = "rainbow.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VirtualSurfaceArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Azimuth samples per cross-section.
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u32).range(2..))]
    pub azimuths: u32,
    /// Heights of the cross-sections on the tube.
    #[arg(
        long,
        value_name = "LEN",
        value_delimiter = ',',
        default_value = "2cm,4cm,6cm,8cm,10cm,12cm,14cm,16cm"
    )]
    pub heights: Vec<Length>,
    #[arg(long, value_name = "FILE", default_value = "virtual-surface.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BlurSpotArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Azimuth of the mirror point from the eye's side.
    #[arg(long, value_name = "ANGLE", default_value = "0.3rad")]
    pub azimuth: Angle,
    /// Height of the mirror point.
    #[arg(long, value_name = "LEN", default_value = "8cm")]
    pub z: Length,
    #[arg(long, value_name = "LEN", default_value = "4mm")]
    pub aperture: Length,
    /// `h`, `v`, `mid` or a distance from the eye.
    #[arg(long, value_name = "FOCUS", default_value = "h")]
    pub focus: Focus,
    #[arg(long, value_name = "FILE", default_value = "blur-spot.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Focus {
    H,
    V,
    Mid,
    Distance(Length),
}

impl std::str::FromStr for Focus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "h" | "H" => Ok(Focus::H),
            "v" | "V" => Ok(Focus::V),
            "mid" => Ok(Focus::Mid),
            _ => s
                .parse::<Length>()
                .map(Focus::Distance)
                .map_err(|_| format!("expected h, v, mid or a length such as 30cm, got `{s}`")),
        }
    }
}

/// Observer above water, shared by the pool and ruler.
#[derive(Debug, Args, Default, Clone)]
pub struct WaterArgs {
    /// Eye height above the water surface [default: 10ft for pool, 30cm for ruler].
    #[arg(long, value_name = "LEN")]
    pub eye_height: Option<Length>,
    /// Refractive index of the water [default: 1.333].
    #[arg(long = "n", value_name = "INDEX")]
    pub n: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FloorImageArg {
    H,
    V,
    Back,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    #[command(flatten)]
    pub water: WaterArgs,
    /// Pool depth [default: 10ft].
    #[arg(long, value_name = "LEN")]
    pub depth: Option<Length>,
    /// Gaze below the horizon at which the slope is reported.
    #[arg(long, value_name = "ANGLE", default_value = "35deg")]
    pub gaze: Angle,
    /// Which apparent point stands for the floor.
    #[arg(long, value_enum, default_value = "h")]
    pub image: FloorImageArg,
    /// Samples of the profile between 10 and 89 degrees.
    #[arg(long, default_value_t = 160, value_parser = clap::value_parser!(u32).range(2..))]
    pub samples: u32,
    #[arg(long, value_name = "FILE", default_value = "pool.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RulerArgs {
    #[command(flatten)]
    pub water: WaterArgs,
    /// Horizontal distance from the eye to the ruler.
    #[arg(long, value_name = "LEN", default_value = "1.2m")]
    pub distance: Length,
    /// Submerged length of the ruler.
    #[arg(long, value_name = "LEN", default_value = "30cm")]
    pub length: Length,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(2..))]
    pub samples: u32,
    #[arg(long, value_name = "FILE", default_value = "ruler.svg")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ArcherArgs {
    /// Direction of a distant target as seen from under water, from the vertical.
    #[arg(long, value_name = "ANGLE", conflicts_with_all = ["fish_depth", "target_height", "target_distance"])]
    pub angle: Option<Angle>,
    /// Depth of the fish's eye.
    #[arg(long, value_name = "LEN", default_value = "20cm")]
    pub fish_depth: Length,
    /// Height of the target above the water.
    #[arg(long, value_name = "LEN", default_value = "30cm")]
    pub target_height: Length,
    /// Horizontal distance from the fish to the target.
    #[arg(long, value_name = "LEN", default_value = "25cm")]
    pub target_distance: Length,
    #[arg(long = "n", value_name = "INDEX", default_value_t = 1.333)]
    pub n: f64,
    #[arg(long, value_name = "FILE", default_value = "archer.svg")]
    pub out: PathBuf,
}

fn parse_kind(s: &str) -> Result<AnamorphKind, String> {
    s.parse()
        .map_err(|e: catoptrics_core::OpticsError| e.to_string())
}

fn parse_sheet(s: &str) -> Result<SheetSize, String> {
    s.parse()
        .map_err(|e: catoptrics_core::OpticsError| e.to_string())
}
