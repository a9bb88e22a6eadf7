import yargs from "yargs";
import { InputError, SOLUTION_VARS, SolutionVar } from "./csv.js";
import { plotConvergence } from "./convergence.js";
import { FigureSpec, loadFigureSpec, plotSolutions } from "./solutions.js";

function fail(e: unknown): number {
  if (e instanceof InputError) {
    console.error(`error: ${e.message}`);
    return 1;
  }
  throw e;
}

const splitList = (s: string) => s.split(",").map((p) => p.trim()).filter(Boolean);

export function runPlotSolutions(argv: string[]): number {
  const args = yargs(argv)
    .usage("plot-solutions [spec.json] [flags]")
    .command("$0 [spec]", "overlay solution CSVs, one panel per variable", (y) =>
      y.positional("spec", { type: "string", describe: "JSON figure spec" })
    )
    .option("inputs", { type: "string", describe: "comma-separated solution CSVs" })
    .option("vars", { type: "string", describe: `subset of ${SOLUTION_VARS.join(",")}` })
    .option("labels", { type: "string", describe: "comma-separated legend labels" })
    .option("out", { type: "string", describe: "output image (.svg or .png)" })
    .option("log-y", { type: "boolean", default: false })
    .strict()
    .exitProcess(false)
    .parseSync();

  try {
    let spec: FigureSpec;
    if (args.spec) {
      spec = loadFigureSpec(args.spec as string);
    } else {
      if (!args.inputs || !args.out) {
        throw new InputError("need a spec.json or both --inputs and --out");
      }
      const vars = args.vars ? splitList(args.vars) : undefined;
      for (const v of vars ?? []) {
        if (!(SOLUTION_VARS as readonly string[]).includes(v)) {
          throw new InputError(`unknown variable '${v}' (choose from ${SOLUTION_VARS.join(",")})`);
        }
      }
      spec = {
        inputs: splitList(args.inputs),
        variables: vars as SolutionVar[] | undefined,
        labels: args.labels ? splitList(args.labels) : undefined,
        output: args.out,
        logY: args["log-y"],
      };
    }
    const res = plotSolutions(spec);
    console.log(`wrote ${res.output} (${res.panels} panels: ${res.labels.join(", ")})`);
    return 0;
  } catch (e) {
    return fail(e);
  }
}

export function runPlotConvergence(argv: string[]): number {
  const args = yargs(argv)
    .usage("plot-convergence <table.csv> --out FILE")
    .command("$0 <table>", "log-log error plot with fitted slopes", (y) =>
      y.positional("table", { type: "string", demandOption: true })
    )
    .option("out", { type: "string", demandOption: true, describe: "output image (.svg or .png)" })
    .option("var", { type: "string", default: "f", describe: "error column's variable" })
    .option("cpu", { type: "boolean", default: false, describe: "add an error-vs-runtime panel" })
    .strict()
    .exitProcess(false)
    .parseSync();

  try {
    const res = plotConvergence({
      table: args.table as string,
      output: args.out,
      variable: args.var,
      cpu: args.cpu,
    });
    for (const [scheme, slope] of Object.entries(res.slopes).sort()) {
      console.log(`${scheme} slope = ${slope.toFixed(3)}`);
    }
    console.log(`wrote ${res.output}`);
    return 0;
  } catch (e) {
    return fail(e);
  }
}
