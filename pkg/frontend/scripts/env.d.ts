// Minimal ambient declarations for the golden generator's node surface,
// so the script builds without a node typings install.

declare module "node:fs" {
  export function mkdirSync(path: string, options?: { recursive?: boolean }): void;
  export function writeFileSync(path: string, data: string): void;
}

declare module "node:path" {
  export function dirname(path: string): string;
  export function join(...parts: string[]): string;
}

declare module "node:url" {
  export function fileURLToPath(url: string): string;
}

interface ImportMeta {
  url: string;
}

declare const console: { log(...args: unknown[]): void; warn(...args: unknown[]): void };
