#!/usr/bin/env node
import { runPlotSolutions } from "./cli.js";

process.exit(runPlotSolutions(process.argv.slice(2)));
