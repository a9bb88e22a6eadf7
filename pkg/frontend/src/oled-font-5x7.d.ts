declare module "oled-font-5x7" {
  interface Font5x7 {
    monospace: boolean;
    width: number;
    height: number;
    fontData: number[];
    lookup: string[];
  }
  const font: Font5x7;
  export = font;
}
