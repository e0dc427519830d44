//! Screen-reader summaries for charts, and accessibility audits of Android
//! view-hierarchy dumps.
//!
//! * [`text`] and [`descriptors`] turn raw chart data into spoken summaries.
//! * [`hierarchy`] parses `uiautomator dump` XML.
//! * [`audit`] finds chart views in a dump and checks whether a screen reader
//!   can reach them.
//! * [`focus`] replays what a screen reader would say walking a screen.
//! * [`cli`] is the `chartsay` command-line front end.

pub mod audit;
pub mod cli;
pub mod descriptors;
pub mod focus;
pub mod hierarchy;
pub mod text;

pub use descriptors::{ChartData, ChartSettings};
pub use hierarchy::{parse_dump, Hierarchy, UiNode};
pub use text::{Descriptor, DescriptorConfig, DomainError};
