//! Two-stage planning of repair crews for power-grid restoration over a
//! coupled power/road network.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! - [`network`]: road ingestion, feeder projection, road failures and the
//!   reduced complete graph over depots and damaged nodes;
//! - [`scenario`]: crew taxonomy, tornado damage and seeded scenario sets;
//! - [`stage1`]: crew capacities and per-scenario assignments;
//! - [`routing`]: exact per-scenario, per-crew routes;
//! - [`schedule`]: per-node crew intervals and Gantt output.

pub mod geo;
pub mod io;
pub mod network;
pub mod routing;
pub mod scenario;
pub mod schedule;
pub mod stage1;
pub mod units;

pub use network::{CompleteGraph, CoupledNetwork, FrameOffset, NetworkError, PowerNode, RoadGraph};
pub use routing::{Route, RoutePlan, RoutingError, RoutingInstance, TravelRates};
pub use scenario::{CrewCosts, CrewKind, Scenario, ScenarioConfig, ScenarioError, ScenarioSet, TornadoEvent};
pub use schedule::{GanttChart, GanttEntry, ScheduleError};
pub use stage1::{AllocationFile, CrewAllocation, ObjectiveWeights, Stage1Error, Stage1Instance};
pub use units::{Cost, Distance, NodeId};
