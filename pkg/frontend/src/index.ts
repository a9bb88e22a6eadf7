export { InputError, parseMeta, readDataset, parseConvergenceCsv, SOLUTION_VARS } from "./csv.js";
export type { Dataset, ConvergenceRow, SolutionVar } from "./csv.js";
export { leastSquaresSlope, fitSlopes, plotConvergence, buildConvergenceScene, writeFigure } from "./convergence.js";
export type { SchemeFit, ConvergencePlotOptions } from "./convergence.js";
export { FigureSpecSchema, loadFigureSpec, plotSolutions } from "./solutions.js";
export type { FigureSpec, SolutionsResult } from "./solutions.js";
export { buildPanel, buildLegendStrip, niceTicks, PALETTE } from "./scene.js";
export type { Scene, SceneItem, PanelSpec, Series } from "./scene.js";
export { renderSvg } from "./svg.js";
export { renderPng } from "./png.js";
export { runPlotSolutions, runPlotConvergence } from "./cli.js";
