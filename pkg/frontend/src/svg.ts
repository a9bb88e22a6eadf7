import { Scene, SceneItem } from "./scene.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const f = (v: number) => (Math.round(v * 100) / 100).toString();

let clipSeq: number;

function emit(item: SceneItem, defs: string[]): string {
  const clipAttr = (clip?: { x: number; y: number; w: number; h: number }) => {
    if (!clip) return "";
    const id = `c${clipSeq++}`;
    defs.push(
      `<clipPath id="${id}"><rect x="${f(clip.x)}" y="${f(clip.y)}" width="${f(clip.w)}" height="${f(clip.h)}"/></clipPath>`
    );
    return ` clip-path="url(#${id})"`;
  };
  switch (item.kind) {
    case "line": {
      const dash = item.dash ? ` stroke-dasharray="${item.dash}"` : "";
      return `<line x1="${f(item.x1)}" y1="${f(item.y1)}" x2="${f(item.x2)}" y2="${f(item.y2)}" stroke="${item.color}" stroke-width="${item.width}"${dash}/>`;
    }
    case "polyline": {
      const pts = item.pts.map(([x, y]) => `${f(x)},${f(y)}`).join(" ");
      const dash = item.dash ? ` stroke-dasharray="${item.dash}"` : "";
      return `<polyline${clipAttr(item.clip)} fill="none" stroke="${item.color}" stroke-width="${item.width}"${dash} points="${pts}"/>`;
    }
    case "rect": {
      const cls = item.cls ? ` class="${item.cls}"` : "";
      const op = item.opacity !== undefined ? ` fill-opacity="${item.opacity}"` : "";
      return `<rect${cls} x="${f(item.x)}" y="${f(item.y)}" width="${f(item.w)}" height="${f(item.h)}" fill="${item.fill}"${op}/>`;
    }
    case "circle":
      return `<circle${clipAttr(item.clip)} cx="${f(item.cx)}" cy="${f(item.cy)}" r="${f(item.r)}" fill="${item.fill}"/>`;
    case "text": {
      const rot = item.rotate ? ` transform="rotate(${item.rotate},${f(item.x)},${f(item.y)})"` : "";
      return `<text x="${f(item.x)}" y="${f(item.y)}" font-size="${item.size}" fill="${item.color}" text-anchor="${item.anchor}"${rot}>${esc(item.text)}</text>`;
    }
  }
}

export function renderSvg(scene: Scene): string {
  clipSeq = 0;
  const defs: string[] = [];
  const body = scene.items.map((it) => emit(it, defs)).join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${scene.width} ${scene.height}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${scene.width}" height="${scene.height}" fill="#fff"/>\n` +
    (defs.length ? `<defs>${defs.join("")}</defs>\n` : "") +
    body +
    "\n</svg>\n"
  );
}
