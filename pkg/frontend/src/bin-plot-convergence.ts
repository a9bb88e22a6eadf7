#!/usr/bin/env node
import { runPlotConvergence } from "./cli.js";

process.exit(runPlotConvergence(process.argv.slice(2)));
